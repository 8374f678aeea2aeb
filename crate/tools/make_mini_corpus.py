#!/usr/bin/env python3
"""Regenerate fixtures/mini_corpus.jsonl.

Ten tasks hand-ported from public HumanEval-X problems into Java, C++,
and JavaScript, with extended EvalPlus-style assertions. Emits canonical
JSON-lines (compact separators, escaped ASCII) so a load/write round
trip through the toolkit is byte-identical.
"""

import json
import os

JAVA_HEADER = "import java.util.*;\nimport java.lang.*;\n\nclass Solution {\n"


def java_doc(lines):
    body = "".join(f"     {line}\n" for line in lines)
    return "    /**\n" + body + "     */\n"


def cpp_doc(lines):
    body = "".join(f" {line}\n" for line in lines)
    return "/*\n" + body + " */\n"


def js_doc(lines):
    body = "".join(f"  {line}\n" for line in lines)
    return "/*\n" + body + "  */\n"


def java_test(checks):
    body = "".join(f"        {line}\n" for line in checks)
    return "class Main {\n    public static void main(String[] args) {\n" + body + "    }\n}\n"


def java_check(cond, label):
    return f'if (!({cond})) {{ throw new AssertionError("{label}"); }}'


def cpp_test(checks, includes=()):
    body = "".join(f"    {line}\n" for line in checks)
    inc = "".join(f"#include <{h}>\n" for h in includes)
    return "#undef NDEBUG\n#include <cassert>\n" + inc + "int main() {\n" + body + "    return 0;\n}\n"


def js_test(checks):
    body = "".join(f"{line}\n" for line in checks)
    return "const assert = require('node:assert');\n" + body + "console.log('All tests passed');\n"


TASKS = []


def task(task_id, java, cpp, js):
    for language, record in (("java", java), ("cpp", cpp), ("javascript", js)):
        TASKS.append(
            {
                "task_id": task_id,
                "language": language,
                "header": record.get("header", "" if language == "javascript" else None),
                "docstring": record["docstring"],
                "signature": record["signature"],
                "canonical_solution": record["solution"],
                "test": record["test"],
                "entry_point": record["entry_point"],
            }
        )


CPP_COMMON_HEADER = (
    "#include <vector>\n#include <string>\n#include <cmath>\n#include <set>\n"
    "#include <cctype>\nusing namespace std;\n\n"
)

# ----------------------------------------------------------------------
# HumanEval_0: has_close_elements
# ----------------------------------------------------------------------
task(
    "HumanEval_0",
    java={
        "header": JAVA_HEADER,
        "docstring": java_doc(
            [
                "Check if in given list of numbers, any two numbers are closer to each",
                "other than a given threshold.",
                ">>> hasCloseElements(List.of(1.0, 2.0, 3.0), 0.5)",
                "false",
                ">>> hasCloseElements(List.of(1.0, 2.8, 3.0, 4.0, 5.0, 2.0), 0.3)",
                "true",
            ]
        ),
        "signature": "    public static boolean hasCloseElements(List<Double> numbers, double threshold) {\n",
        "solution": (
            "        for (int i = 0; i < numbers.size(); i++) {\n"
            "            for (int j = i + 1; j < numbers.size(); j++) {\n"
            "                double distance = Math.abs(numbers.get(i) - numbers.get(j));\n"
            "                if (distance < threshold) {\n"
            "                    return true;\n"
            "                }\n"
            "            }\n"
            "        }\n"
            "        return false;\n"
            "    }\n"
            "}\n"
        ),
        "test": java_test(
            [
                java_check("Solution.hasCloseElements(List.of(1.0, 2.0, 3.9, 4.0, 5.0, 2.2), 0.3) == true", "case 1"),
                java_check("Solution.hasCloseElements(List.of(1.0, 2.0, 3.9, 4.0, 5.0, 2.2), 0.05) == false", "case 2"),
                java_check("Solution.hasCloseElements(List.of(1.0, 2.0, 5.9, 4.0, 5.0), 0.95) == true", "case 3"),
                java_check("Solution.hasCloseElements(List.of(1.0, 2.0, 5.9, 4.0, 5.0), 0.8) == false", "case 4"),
                java_check("Solution.hasCloseElements(List.of(1.0, 2.0, 3.0, 4.0, 5.0, 2.0), 0.1) == true", "case 5"),
                java_check("Solution.hasCloseElements(List.of(1.1, 2.2, 3.1, 4.1, 5.1), 1.0) == true", "case 6"),
                java_check("Solution.hasCloseElements(List.of(1.1, 2.2, 3.1, 4.1, 5.1), 0.5) == false", "case 7"),
                java_check("Solution.hasCloseElements(List.of(), 0.5) == false", "case 8"),
                java_check("Solution.hasCloseElements(List.of(1.0), 0.5) == false", "case 9"),
                java_check("Solution.hasCloseElements(List.of(3.0, 3.0), 0.0) == false", "case 10"),
            ]
        ),
        "entry_point": "hasCloseElements",
    },
    cpp={
        "header": CPP_COMMON_HEADER,
        "docstring": cpp_doc(
            [
                "Check if in given vector of numbers, any two numbers are closer to each",
                "other than a given threshold.",
                ">>> has_close_elements({1.0, 2.0, 3.0}, 0.5)",
                "false",
                ">>> has_close_elements({1.0, 2.8, 3.0, 4.0, 5.0, 2.0}, 0.3)",
                "true",
            ]
        ),
        "signature": "bool has_close_elements(vector<double> numbers, double threshold) {\n",
        "solution": (
            "    for (int i = 0; i < (int)numbers.size(); i++) {\n"
            "        for (int j = i + 1; j < (int)numbers.size(); j++) {\n"
            "            double distance = fabs(numbers[i] - numbers[j]);\n"
            "            if (distance < threshold) {\n"
            "                return true;\n"
            "            }\n"
            "        }\n"
            "    }\n"
            "    return false;\n"
            "}\n"
        ),
        "test": cpp_test(
            [
                "assert(has_close_elements({1.0, 2.0, 3.9, 4.0, 5.0, 2.2}, 0.3) == true);",
                "assert(has_close_elements({1.0, 2.0, 3.9, 4.0, 5.0, 2.2}, 0.05) == false);",
                "assert(has_close_elements({1.0, 2.0, 5.9, 4.0, 5.0}, 0.95) == true);",
                "assert(has_close_elements({1.0, 2.0, 5.9, 4.0, 5.0}, 0.8) == false);",
                "assert(has_close_elements({1.0, 2.0, 3.0, 4.0, 5.0, 2.0}, 0.1) == true);",
                "assert(has_close_elements({1.1, 2.2, 3.1, 4.1, 5.1}, 1.0) == true);",
                "assert(has_close_elements({1.1, 2.2, 3.1, 4.1, 5.1}, 0.5) == false);",
                "assert(has_close_elements(vector<double>(), 0.5) == false);",
                "assert(has_close_elements({1.0}, 0.5) == false);",
                "assert(has_close_elements({3.0, 3.0}, 0.0) == false);",
            ]
        ),
        "entry_point": "has_close_elements",
    },
    js={
        "header": "",
        "docstring": js_doc(
            [
                "Check if in given list of numbers, any two numbers are closer to each",
                "other than a given threshold.",
                ">>> hasCloseElements([1.0, 2.0, 3.0], 0.5)",
                "false",
                ">>> hasCloseElements([1.0, 2.8, 3.0, 4.0, 5.0, 2.0], 0.3)",
                "true",
            ]
        ),
        "signature": "function hasCloseElements(numbers, threshold) {\n",
        "solution": (
            "    for (let i = 0; i < numbers.length; i++) {\n"
            "        for (let j = i + 1; j < numbers.length; j++) {\n"
            "            const distance = Math.abs(numbers[i] - numbers[j]);\n"
            "            if (distance < threshold) {\n"
            "                return true;\n"
            "            }\n"
            "        }\n"
            "    }\n"
            "    return false;\n"
            "}\n"
        ),
        "test": js_test(
            [
                "assert.strictEqual(hasCloseElements([1.0, 2.0, 3.9, 4.0, 5.0, 2.2], 0.3), true);",
                "assert.strictEqual(hasCloseElements([1.0, 2.0, 3.9, 4.0, 5.0, 2.2], 0.05), false);",
                "assert.strictEqual(hasCloseElements([1.0, 2.0, 5.9, 4.0, 5.0], 0.95), true);",
                "assert.strictEqual(hasCloseElements([1.0, 2.0, 5.9, 4.0, 5.0], 0.8), false);",
                "assert.strictEqual(hasCloseElements([1.0, 2.0, 3.0, 4.0, 5.0, 2.0], 0.1), true);",
                "assert.strictEqual(hasCloseElements([1.1, 2.2, 3.1, 4.1, 5.1], 1.0), true);",
                "assert.strictEqual(hasCloseElements([1.1, 2.2, 3.1, 4.1, 5.1], 0.5), false);",
                "assert.strictEqual(hasCloseElements([], 0.5), false);",
                "assert.strictEqual(hasCloseElements([1.0], 0.5), false);",
                "assert.strictEqual(hasCloseElements([3.0, 3.0], 0.0), false);",
            ]
        ),
        "entry_point": "hasCloseElements",
    },
)

# ----------------------------------------------------------------------
# HumanEval_7: filter_by_prefix
# ----------------------------------------------------------------------
task(
    "HumanEval_7",
    java={
        "header": JAVA_HEADER,
        "docstring": java_doc(
            [
                "Filter an input list of strings only for ones that start with a given prefix.",
                ">>> filterByPrefix(List.of(), \"a\")",
                "[]",
                ">>> filterByPrefix(List.of(\"abc\", \"bcd\", \"cde\", \"array\"), \"a\")",
                "[\"abc\", \"array\"]",
            ]
        ),
        "signature": "    public static List<String> filterByPrefix(List<String> strings, String prefix) {\n",
        "solution": (
            "        List<String> result = new ArrayList<>();\n"
            "        for (int i = 0; i < strings.size(); i++) {\n"
            "            if (strings.get(i).startsWith(prefix)) {\n"
            "                result.add(strings.get(i));\n"
            "            }\n"
            "        }\n"
            "        return result;\n"
            "    }\n"
            "}\n"
        ),
        "test": java_test(
            [
                java_check("Solution.filterByPrefix(List.of(), \"john\").equals(List.of())", "case 1"),
                java_check(
                    "Solution.filterByPrefix(List.of(\"xxx\", \"asd\", \"xxy\", \"john doe\", \"xxxAAA\", \"xxx\"), \"xxx\").equals(List.of(\"xxx\", \"xxxAAA\", \"xxx\"))",
                    "case 2",
                ),
                java_check("Solution.filterByPrefix(List.of(\"abc\", \"bcd\", \"cde\", \"array\"), \"a\").equals(List.of(\"abc\", \"array\"))", "case 3"),
                java_check("Solution.filterByPrefix(List.of(\"aaa\", \"aa\", \"a\"), \"aa\").equals(List.of(\"aaa\", \"aa\"))", "case 4"),
                java_check("Solution.filterByPrefix(List.of(\"plain\"), \"\").equals(List.of(\"plain\"))", "case 5"),
                java_check("Solution.filterByPrefix(List.of(\"x\"), \"xyz\").equals(List.of())", "case 6"),
            ]
        ),
        "entry_point": "filterByPrefix",
    },
    cpp={
        "header": CPP_COMMON_HEADER,
        "docstring": cpp_doc(
            [
                "Filter an input vector of strings only for ones that start with a given prefix.",
                ">>> filter_by_prefix({}, \"a\")",
                "{}",
                ">>> filter_by_prefix({\"abc\", \"bcd\", \"cde\", \"array\"}, \"a\")",
                "{\"abc\", \"array\"}",
            ]
        ),
        "signature": "vector<string> filter_by_prefix(vector<string> strings, string prefix) {\n",
        "solution": (
            "    vector<string> result;\n"
            "    for (int i = 0; i < (int)strings.size(); i++) {\n"
            "        if (strings[i].rfind(prefix, 0) == 0) {\n"
            "            result.push_back(strings[i]);\n"
            "        }\n"
            "    }\n"
            "    return result;\n"
            "}\n"
        ),
        "test": cpp_test(
            [
                "assert(filter_by_prefix(vector<string>(), \"john\") == vector<string>());",
                "assert(filter_by_prefix({\"xxx\", \"asd\", \"xxy\", \"john doe\", \"xxxAAA\", \"xxx\"}, \"xxx\") == vector<string>({\"xxx\", \"xxxAAA\", \"xxx\"}));",
                "assert(filter_by_prefix({\"abc\", \"bcd\", \"cde\", \"array\"}, \"a\") == vector<string>({\"abc\", \"array\"}));",
                "assert(filter_by_prefix({\"aaa\", \"aa\", \"a\"}, \"aa\") == vector<string>({\"aaa\", \"aa\"}));",
                "assert(filter_by_prefix({\"plain\"}, \"\") == vector<string>({\"plain\"}));",
                "assert(filter_by_prefix({\"x\"}, \"xyz\") == vector<string>());",
            ]
        ),
        "entry_point": "filter_by_prefix",
    },
    js={
        "header": "",
        "docstring": js_doc(
            [
                "Filter an input list of strings only for ones that start with a given prefix.",
                ">>> filterByPrefix([], 'a')",
                "[]",
                ">>> filterByPrefix(['abc', 'bcd', 'cde', 'array'], 'a')",
                "['abc', 'array']",
            ]
        ),
        "signature": "function filterByPrefix(strings, prefix) {\n",
        "solution": (
            "    let result = [];\n"
            "    for (let i = 0; i < strings.length; i++) {\n"
            "        if (strings[i].startsWith(prefix)) {\n"
            "            result.push(strings[i]);\n"
            "        }\n"
            "    }\n"
            "    return result;\n"
            "}\n"
        ),
        "test": js_test(
            [
                "assert.deepStrictEqual(filterByPrefix([], 'john'), []);",
                "assert.deepStrictEqual(filterByPrefix(['xxx', 'asd', 'xxy', 'john doe', 'xxxAAA', 'xxx'], 'xxx'), ['xxx', 'xxxAAA', 'xxx']);",
                "assert.deepStrictEqual(filterByPrefix(['abc', 'bcd', 'cde', 'array'], 'a'), ['abc', 'array']);",
                "assert.deepStrictEqual(filterByPrefix(['aaa', 'aa', 'a'], 'aa'), ['aaa', 'aa']);",
                "assert.deepStrictEqual(filterByPrefix(['plain'], ''), ['plain']);",
                "assert.deepStrictEqual(filterByPrefix(['x'], 'xyz'), []);",
            ]
        ),
        "entry_point": "filterByPrefix",
    },
)

# ----------------------------------------------------------------------
# HumanEval_8: sum_product (while-loop bodies)
# ----------------------------------------------------------------------
task(
    "HumanEval_8",
    java={
        "header": JAVA_HEADER,
        "docstring": java_doc(
            [
                "For a given list of integers, return a list consisting of a sum and a",
                "product of all the integers in the list.",
                "An empty sum equals 0 and an empty product equals 1.",
                ">>> sumProduct(List.of())",
                "[0, 1]",
                ">>> sumProduct(List.of(1, 2, 3, 4))",
                "[10, 24]",
            ]
        ),
        "signature": "    public static List<Integer> sumProduct(List<Integer> numbers) {\n",
        "solution": (
            "        int sum = 0;\n"
            "        int product = 1;\n"
            "        int index = 0;\n"
            "        while (index < numbers.size()) {\n"
            "            sum += numbers.get(index);\n"
            "            product *= numbers.get(index);\n"
            "            index++;\n"
            "        }\n"
            "        return Arrays.asList(sum, product);\n"
            "    }\n"
            "}\n"
        ),
        "test": java_test(
            [
                java_check("Solution.sumProduct(List.of()).equals(List.of(0, 1))", "case 1"),
                java_check("Solution.sumProduct(List.of(1, 1, 1)).equals(List.of(3, 1))", "case 2"),
                java_check("Solution.sumProduct(List.of(100, 0)).equals(List.of(100, 0))", "case 3"),
                java_check("Solution.sumProduct(List.of(3, 5, 7)).equals(List.of(15, 105))", "case 4"),
                java_check("Solution.sumProduct(List.of(10)).equals(List.of(10, 10))", "case 5"),
                java_check("Solution.sumProduct(List.of(-1, 2, -3)).equals(List.of(-2, 6))", "case 6"),
            ]
        ),
        "entry_point": "sumProduct",
    },
    cpp={
        "header": CPP_COMMON_HEADER,
        "docstring": cpp_doc(
            [
                "For a given vector of integers, return a vector consisting of a sum and a",
                "product of all the integers in the vector.",
                "An empty sum equals 0 and an empty product equals 1.",
                ">>> sum_product({})",
                "{0, 1}",
                ">>> sum_product({1, 2, 3, 4})",
                "{10, 24}",
            ]
        ),
        "signature": "vector<int> sum_product(vector<int> numbers) {\n",
        "solution": (
            "    int sum = 0;\n"
            "    int product = 1;\n"
            "    int index = 0;\n"
            "    while (index < (int)numbers.size()) {\n"
            "        sum += numbers[index];\n"
            "        product *= numbers[index];\n"
            "        index++;\n"
            "    }\n"
            "    return vector<int>({sum, product});\n"
            "}\n"
        ),
        "test": cpp_test(
            [
                "assert(sum_product(vector<int>()) == vector<int>({0, 1}));",
                "assert(sum_product({1, 1, 1}) == vector<int>({3, 1}));",
                "assert(sum_product({100, 0}) == vector<int>({100, 0}));",
                "assert(sum_product({3, 5, 7}) == vector<int>({15, 105}));",
                "assert(sum_product({10}) == vector<int>({10, 10}));",
                "assert(sum_product({-1, 2, -3}) == vector<int>({-2, 6}));",
            ]
        ),
        "entry_point": "sum_product",
    },
    js={
        "header": "",
        "docstring": js_doc(
            [
                "For a given list of integers, return a list consisting of a sum and a",
                "product of all the integers in the list.",
                "An empty sum equals 0 and an empty product equals 1.",
                ">>> sumProduct([])",
                "[0, 1]",
                ">>> sumProduct([1, 2, 3, 4])",
                "[10, 24]",
            ]
        ),
        "signature": "function sumProduct(numbers) {\n",
        "solution": (
            "    let sum = 0;\n"
            "    let product = 1;\n"
            "    let index = 0;\n"
            "    while (index < numbers.length) {\n"
            "        sum += numbers[index];\n"
            "        product *= numbers[index];\n"
            "        index++;\n"
            "    }\n"
            "    return [sum, product];\n"
            "}\n"
        ),
        "test": js_test(
            [
                "assert.deepStrictEqual(sumProduct([]), [0, 1]);",
                "assert.deepStrictEqual(sumProduct([1, 1, 1]), [3, 1]);",
                "assert.deepStrictEqual(sumProduct([100, 0]), [100, 0]);",
                "assert.deepStrictEqual(sumProduct([3, 5, 7]), [15, 105]);",
                "assert.deepStrictEqual(sumProduct([10]), [10, 10]);",
                "assert.deepStrictEqual(sumProduct([-1, 2, -3]), [-2, 6]);",
            ]
        ),
        "entry_point": "sumProduct",
    },
)

# ----------------------------------------------------------------------
# HumanEval_12: longest
# ----------------------------------------------------------------------
task(
    "HumanEval_12",
    java={
        "header": JAVA_HEADER,
        "docstring": java_doc(
            [
                "Out of a list of strings, return the longest one. Return the first one in",
                "case of multiple strings of the same length. Return null for an empty list.",
                ">>> longest(List.of(\"a\", \"b\", \"c\"))",
                "\"a\"",
                ">>> longest(List.of(\"a\", \"bb\", \"ccc\"))",
                "\"ccc\"",
            ]
        ),
        "signature": "    public static String longest(List<String> strings) {\n",
        "solution": (
            "        String result = null;\n"
            "        for (int i = 0; i < strings.size(); i++) {\n"
            "            String current = strings.get(i);\n"
            "            if (result == null || current.length() > result.length()) {\n"
            "                result = current;\n"
            "            }\n"
            "        }\n"
            "        return result;\n"
            "    }\n"
            "}\n"
        ),
        "test": java_test(
            [
                java_check("Objects.equals(Solution.longest(List.of()), null)", "case 1"),
                java_check("Objects.equals(Solution.longest(List.of(\"x\", \"y\", \"z\")), \"x\")", "case 2"),
                java_check("Objects.equals(Solution.longest(List.of(\"x\", \"yyy\", \"zzzz\", \"www\", \"kkkk\", \"abc\")), \"zzzz\")", "case 3"),
                java_check("Objects.equals(Solution.longest(List.of(\"aa\", \"bb\", \"cc\")), \"aa\")", "case 4"),
                java_check("Objects.equals(Solution.longest(List.of(\"\", \"a\")), \"a\")", "case 5"),
            ]
        ),
        "entry_point": "longest",
    },
    cpp={
        "header": CPP_COMMON_HEADER,
        "docstring": cpp_doc(
            [
                "Out of a vector of strings, return the longest one. Return the first one in",
                "case of multiple strings of the same length. Return an empty string for an",
                "empty vector.",
                ">>> longest({\"a\", \"b\", \"c\"})",
                "\"a\"",
                ">>> longest({\"a\", \"bb\", \"ccc\"})",
                "\"ccc\"",
            ]
        ),
        "signature": "string longest(vector<string> strings) {\n",
        "solution": (
            "    string result = \"\";\n"
            "    for (int i = 0; i < (int)strings.size(); i++) {\n"
            "        string current = strings[i];\n"
            "        if (current.size() > result.size()) {\n"
            "            result = current;\n"
            "        }\n"
            "    }\n"
            "    return result;\n"
            "}\n"
        ),
        "test": cpp_test(
            [
                "assert(longest(vector<string>()) == \"\");",
                "assert(longest({\"x\", \"y\", \"z\"}) == \"x\");",
                "assert(longest({\"x\", \"yyy\", \"zzzz\", \"www\", \"kkkk\", \"abc\"}) == \"zzzz\");",
                "assert(longest({\"aa\", \"bb\", \"cc\"}) == \"aa\");",
                "assert(longest({\"\", \"a\"}) == \"a\");",
            ]
        ),
        "entry_point": "longest",
    },
    js={
        "header": "",
        "docstring": js_doc(
            [
                "Out of a list of strings, return the longest one. Return the first one in",
                "case of multiple strings of the same length. Return undefined for an empty list.",
                ">>> longest(['a', 'b', 'c'])",
                "'a'",
                ">>> longest(['a', 'bb', 'ccc'])",
                "'ccc'",
            ]
        ),
        "signature": "function longest(strings) {\n",
        "solution": (
            "    let result = undefined;\n"
            "    for (let i = 0; i < strings.length; i++) {\n"
            "        const current = strings[i];\n"
            "        if (result === undefined || current.length > result.length) {\n"
            "            result = current;\n"
            "        }\n"
            "    }\n"
            "    return result;\n"
            "}\n"
        ),
        "test": js_test(
            [
                "assert.strictEqual(longest([]), undefined);",
                "assert.strictEqual(longest(['x', 'y', 'z']), 'x');",
                "assert.strictEqual(longest(['x', 'yyy', 'zzzz', 'www', 'kkkk', 'abc']), 'zzzz');",
                "assert.strictEqual(longest(['aa', 'bb', 'cc']), 'aa');",
                "assert.strictEqual(longest(['', 'a']), 'a');",
            ]
        ),
        "entry_point": "longest",
    },
)

# ----------------------------------------------------------------------
# HumanEval_16: count_distinct_characters
# ----------------------------------------------------------------------
task(
    "HumanEval_16",
    java={
        "header": JAVA_HEADER,
        "docstring": java_doc(
            [
                "Given a string, find out how many distinct characters it is made of,",
                "regardless of case.",
                ">>> countDistinctCharacters(\"xyzXYZ\")",
                "3",
                ">>> countDistinctCharacters(\"Jerry\")",
                "4",
            ]
        ),
        "signature": "    public static int countDistinctCharacters(String text) {\n",
        "solution": (
            "        Set<Character> seen = new HashSet<>();\n"
            "        String lowered = text.toLowerCase();\n"
            "        for (int i = 0; i < lowered.length(); i++) {\n"
            "            seen.add(lowered.charAt(i));\n"
            "        }\n"
            "        return seen.size();\n"
            "    }\n"
            "}\n"
        ),
        "test": java_test(
            [
                java_check("Solution.countDistinctCharacters(\"\") == 0", "case 1"),
                java_check("Solution.countDistinctCharacters(\"abcde\") == 5", "case 2"),
                java_check("Solution.countDistinctCharacters(\"abcdeabcdeaA\") == 5", "case 3"),
                java_check("Solution.countDistinctCharacters(\"aaaaAAAAaaaa\") == 1", "case 4"),
                java_check("Solution.countDistinctCharacters(\"Jerry jERRY JeRRRY\") == 6", "case 5"),
                java_check("Solution.countDistinctCharacters(\"xyzXYZ\") == 3", "case 6"),
            ]
        ),
        "entry_point": "countDistinctCharacters",
    },
    cpp={
        "header": CPP_COMMON_HEADER,
        "docstring": cpp_doc(
            [
                "Given a string, find out how many distinct characters it is made of,",
                "regardless of case.",
                ">>> count_distinct_characters(\"xyzXYZ\")",
                "3",
                ">>> count_distinct_characters(\"Jerry\")",
                "4",
            ]
        ),
        "signature": "int count_distinct_characters(string text) {\n",
        "solution": (
            "    set<char> seen;\n"
            "    for (int i = 0; i < (int)text.size(); i++) {\n"
            "        char lowered = tolower(text[i]);\n"
            "        seen.insert(lowered);\n"
            "    }\n"
            "    return (int)seen.size();\n"
            "}\n"
        ),
        "test": cpp_test(
            [
                "assert(count_distinct_characters(\"\") == 0);",
                "assert(count_distinct_characters(\"abcde\") == 5);",
                "assert(count_distinct_characters(\"abcdeabcdeaA\") == 5);",
                "assert(count_distinct_characters(\"aaaaAAAAaaaa\") == 1);",
                "assert(count_distinct_characters(\"Jerry jERRY JeRRRY\") == 6);",
                "assert(count_distinct_characters(\"xyzXYZ\") == 3);",
            ]
        ),
        "entry_point": "count_distinct_characters",
    },
    js={
        "header": "",
        "docstring": js_doc(
            [
                "Given a string, find out how many distinct characters it is made of,",
                "regardless of case.",
                ">>> countDistinctCharacters('xyzXYZ')",
                "3",
                ">>> countDistinctCharacters('Jerry')",
                "4",
            ]
        ),
        "signature": "function countDistinctCharacters(text) {\n",
        "solution": (
            "    const seen = new Set();\n"
            "    const lowered = text.toLowerCase();\n"
            "    for (let i = 0; i < lowered.length; i++) {\n"
            "        seen.add(lowered[i]);\n"
            "    }\n"
            "    return seen.size;\n"
            "}\n"
        ),
        "test": js_test(
            [
                "assert.strictEqual(countDistinctCharacters(''), 0);",
                "assert.strictEqual(countDistinctCharacters('abcde'), 5);",
                "assert.strictEqual(countDistinctCharacters('abcdeabcdeaA'), 5);",
                "assert.strictEqual(countDistinctCharacters('aaaaAAAAaaaa'), 1);",
                "assert.strictEqual(countDistinctCharacters('Jerry jERRY JeRRRY'), 6);",
                "assert.strictEqual(countDistinctCharacters('xyzXYZ'), 3);",
            ]
        ),
        "entry_point": "countDistinctCharacters",
    },
)

# ----------------------------------------------------------------------
# HumanEval_23: string length (single-line bodies)
# ----------------------------------------------------------------------
task(
    "HumanEval_23",
    java={
        "header": JAVA_HEADER,
        "docstring": java_doc(
            [
                "Return the length of the given string.",
                ">>> stringLength(\"\")",
                "0",
                ">>> stringLength(\"abc\")",
                "3",
            ]
        ),
        "signature": "    public static int stringLength(String text) {\n",
        "solution": "        return text.length();\n    }\n}\n",
        "test": java_test(
            [
                java_check("Solution.stringLength(\"\") == 0", "case 1"),
                java_check("Solution.stringLength(\"x\") == 1", "case 2"),
                java_check("Solution.stringLength(\"asdasnakj\") == 9", "case 3"),
                java_check("Solution.stringLength(\"two words\") == 9", "case 4"),
            ]
        ),
        "entry_point": "stringLength",
    },
    cpp={
        "header": CPP_COMMON_HEADER,
        "docstring": cpp_doc(
            [
                "Return the length of the given string.",
                ">>> string_length(\"\")",
                "0",
                ">>> string_length(\"abc\")",
                "3",
            ]
        ),
        "signature": "int string_length(string text) {\n",
        "solution": "    return (int)text.size();\n}\n",
        "test": cpp_test(
            [
                "assert(string_length(\"\") == 0);",
                "assert(string_length(\"x\") == 1);",
                "assert(string_length(\"asdasnakj\") == 9);",
                "assert(string_length(\"two words\") == 9);",
            ]
        ),
        "entry_point": "string_length",
    },
    js={
        "header": "",
        "docstring": js_doc(
            [
                "Return the length of the given string.",
                ">>> stringLength('')",
                "0",
                ">>> stringLength('abc')",
                "3",
            ]
        ),
        "signature": "function stringLength(text) {\n",
        "solution": "    return text.length;\n}\n",
        "test": js_test(
            [
                "assert.strictEqual(stringLength(''), 0);",
                "assert.strictEqual(stringLength('x'), 1);",
                "assert.strictEqual(stringLength('asdasnakj'), 9);",
                "assert.strictEqual(stringLength('two words'), 9);",
            ]
        ),
        "entry_point": "stringLength",
    },
)

# ----------------------------------------------------------------------
# HumanEval_30: get_positive
# ----------------------------------------------------------------------
task(
    "HumanEval_30",
    java={
        "header": JAVA_HEADER,
        "docstring": java_doc(
            [
                "Return only positive numbers in the list.",
                ">>> getPositive(List.of(-1, 2, -4, 5, 6))",
                "[2, 5, 6]",
                ">>> getPositive(List.of(5, 3, -5, 2, -3, 3, 9, 0, 123, 1, -10))",
                "[5, 3, 2, 3, 9, 123, 1]",
            ]
        ),
        "signature": "    public static List<Integer> getPositive(List<Integer> numbers) {\n",
        "solution": (
            "        List<Integer> result = new ArrayList<>();\n"
            "        for (int i = 0; i < numbers.size(); i++) {\n"
            "            if (numbers.get(i) > 0) {\n"
            "                result.add(numbers.get(i));\n"
            "            }\n"
            "        }\n"
            "        return result;\n"
            "    }\n"
            "}\n"
        ),
        "test": java_test(
            [
                java_check("Solution.getPositive(List.of(-1, -2, 4, 5, 6)).equals(List.of(4, 5, 6))", "case 1"),
                java_check("Solution.getPositive(List.of(5, 3, -5, 2, 3, 3, 9, 0, 123, 1, -10)).equals(List.of(5, 3, 2, 3, 3, 9, 123, 1))", "case 2"),
                java_check("Solution.getPositive(List.of(-1, -2)).equals(List.of())", "case 3"),
                java_check("Solution.getPositive(List.of()).equals(List.of())", "case 4"),
                java_check("Solution.getPositive(List.of(0)).equals(List.of())", "case 5"),
                java_check("Solution.getPositive(List.of(1)).equals(List.of(1))", "case 6"),
            ]
        ),
        "entry_point": "getPositive",
    },
    cpp={
        "header": CPP_COMMON_HEADER,
        "docstring": cpp_doc(
            [
                "Return only positive numbers in the vector.",
                ">>> get_positive({-1, 2, -4, 5, 6})",
                "{2, 5, 6}",
                ">>> get_positive({5, 3, -5, 2, -3, 3, 9, 0, 123, 1, -10})",
                "{5, 3, 2, 3, 9, 123, 1}",
            ]
        ),
        "signature": "vector<int> get_positive(vector<int> numbers) {\n",
        "solution": (
            "    vector<int> result;\n"
            "    for (int i = 0; i < (int)numbers.size(); i++) {\n"
            "        if (numbers[i] > 0) {\n"
            "            result.push_back(numbers[i]);\n"
            "        }\n"
            "    }\n"
            "    return result;\n"
            "}\n"
        ),
        "test": cpp_test(
            [
                "assert(get_positive({-1, -2, 4, 5, 6}) == vector<int>({4, 5, 6}));",
                "assert(get_positive({5, 3, -5, 2, 3, 3, 9, 0, 123, 1, -10}) == vector<int>({5, 3, 2, 3, 3, 9, 123, 1}));",
                "assert(get_positive({-1, -2}) == vector<int>());",
                "assert(get_positive(vector<int>()) == vector<int>());",
                "assert(get_positive({0}) == vector<int>());",
                "assert(get_positive({1}) == vector<int>({1}));",
            ]
        ),
        "entry_point": "get_positive",
    },
    js={
        "header": "",
        "docstring": js_doc(
            [
                "Return only positive numbers in the list.",
                ">>> getPositive([-1, 2, -4, 5, 6])",
                "[2, 5, 6]",
                ">>> getPositive([5, 3, -5, 2, -3, 3, 9, 0, 123, 1, -10])",
                "[5, 3, 2, 3, 9, 123, 1]",
            ]
        ),
        "signature": "function getPositive(numbers) {\n",
        "solution": (
            "    let result = [];\n"
            "    for (let i = 0; i < numbers.length; i++) {\n"
            "        if (numbers[i] > 0) {\n"
            "            result.push(numbers[i]);\n"
            "        }\n"
            "    }\n"
            "    return result;\n"
            "}\n"
        ),
        "test": js_test(
            [
                "assert.deepStrictEqual(getPositive([-1, -2, 4, 5, 6]), [4, 5, 6]);",
                "assert.deepStrictEqual(getPositive([5, 3, -5, 2, 3, 3, 9, 0, 123, 1, -10]), [5, 3, 2, 3, 3, 9, 123, 1]);",
                "assert.deepStrictEqual(getPositive([-1, -2]), []);",
                "assert.deepStrictEqual(getPositive([]), []);",
                "assert.deepStrictEqual(getPositive([0]), []);",
                "assert.deepStrictEqual(getPositive([1]), [1]);",
            ]
        ),
        "entry_point": "getPositive",
    },
)

# ----------------------------------------------------------------------
# HumanEval_35: max_element
# ----------------------------------------------------------------------
task(
    "HumanEval_35",
    java={
        "header": JAVA_HEADER,
        "docstring": java_doc(
            [
                "Return the maximum element in the list.",
                ">>> maxElement(List.of(1, 2, 3))",
                "3",
                ">>> maxElement(List.of(5, 3, -5, 2, -3, 3, 9, 0, 124, 1, -10))",
                "124",
            ]
        ),
        "signature": "    public static int maxElement(List<Integer> numbers) {\n",
        "solution": (
            "        int result = numbers.get(0);\n"
            "        for (int i = 1; i < numbers.size(); i++) {\n"
            "            if (numbers.get(i) > result) {\n"
            "                result = numbers.get(i);\n"
            "            }\n"
            "        }\n"
            "        return result;\n"
            "    }\n"
            "}\n"
        ),
        "test": java_test(
            [
                java_check("Solution.maxElement(List.of(1, 2, 3)) == 3", "case 1"),
                java_check("Solution.maxElement(List.of(5, 3, -5, 2, -3, 3, 9, 0, 124, 1, -10)) == 124", "case 2"),
                java_check("Solution.maxElement(List.of(-5)) == -5", "case 3"),
                java_check("Solution.maxElement(List.of(-5, -1, -10)) == -1", "case 4"),
                java_check("Solution.maxElement(List.of(7, 7, 7)) == 7", "case 5"),
            ]
        ),
        "entry_point": "maxElement",
    },
    cpp={
        "header": CPP_COMMON_HEADER,
        "docstring": cpp_doc(
            [
                "Return the maximum element in the vector.",
                ">>> max_element({1, 2, 3})",
                "3",
                ">>> max_element({5, 3, -5, 2, -3, 3, 9, 0, 124, 1, -10})",
                "124",
            ]
        ),
        "signature": "int max_element(vector<int> numbers) {\n",
        "solution": (
            "    int result = numbers[0];\n"
            "    for (int i = 1; i < (int)numbers.size(); i++) {\n"
            "        if (numbers[i] > result) {\n"
            "            result = numbers[i];\n"
            "        }\n"
            "    }\n"
            "    return result;\n"
            "}\n"
        ),
        "test": cpp_test(
            [
                "assert(max_element(vector<int>({1, 2, 3})) == 3);",
                "assert(max_element(vector<int>({5, 3, -5, 2, -3, 3, 9, 0, 124, 1, -10})) == 124);",
                "assert(max_element(vector<int>({-5})) == -5);",
                "assert(max_element(vector<int>({-5, -1, -10})) == -1);",
                "assert(max_element(vector<int>({7, 7, 7})) == 7);",
            ]
        ),
        "entry_point": "max_element",
    },
    js={
        "header": "",
        "docstring": js_doc(
            [
                "Return the maximum element in the list.",
                ">>> maxElement([1, 2, 3])",
                "3",
                ">>> maxElement([5, 3, -5, 2, -3, 3, 9, 0, 124, 1, -10])",
                "124",
            ]
        ),
        "signature": "function maxElement(numbers) {\n",
        "solution": (
            "    let result = numbers[0];\n"
            "    for (let i = 1; i < numbers.length; i++) {\n"
            "        if (numbers[i] > result) {\n"
            "            result = numbers[i];\n"
            "        }\n"
            "    }\n"
            "    return result;\n"
            "}\n"
        ),
        "test": js_test(
            [
                "assert.strictEqual(maxElement([1, 2, 3]), 3);",
                "assert.strictEqual(maxElement([5, 3, -5, 2, -3, 3, 9, 0, 124, 1, -10]), 124);",
                "assert.strictEqual(maxElement([-5]), -5);",
                "assert.strictEqual(maxElement([-5, -1, -10]), -1);",
                "assert.strictEqual(maxElement([7, 7, 7]), 7);",
            ]
        ),
        "entry_point": "maxElement",
    },
)

# ----------------------------------------------------------------------
# HumanEval_42: incr_list
# ----------------------------------------------------------------------
task(
    "HumanEval_42",
    java={
        "header": JAVA_HEADER,
        "docstring": java_doc(
            [
                "Return the list with its elements incremented by 1.",
                ">>> incrList(List.of(1, 2, 3))",
                "[2, 3, 4]",
                ">>> incrList(List.of(5, 3, 5, 2, 3, 3, 9, 0, 123))",
                "[6, 4, 6, 3, 4, 4, 10, 1, 124]",
            ]
        ),
        "signature": "    public static List<Integer> incrList(List<Integer> numbers) {\n",
        "solution": (
            "        List<Integer> result = new ArrayList<>();\n"
            "        for (int i = 0; i < numbers.size(); i++) {\n"
            "            result.add(numbers.get(i) + 1);\n"
            "        }\n"
            "        return result;\n"
            "    }\n"
            "}\n"
        ),
        "test": java_test(
            [
                java_check("Solution.incrList(List.of()).equals(List.of())", "case 1"),
                java_check("Solution.incrList(List.of(3, 2, 1)).equals(List.of(4, 3, 2))", "case 2"),
                java_check("Solution.incrList(List.of(5, 2, 5, 2, 3, 3, 9, 0, 123)).equals(List.of(6, 3, 6, 3, 4, 4, 10, 1, 124))", "case 3"),
                java_check("Solution.incrList(List.of(-1)).equals(List.of(0))", "case 4"),
                java_check("Solution.incrList(List.of(Integer.MAX_VALUE - 1)).equals(List.of(Integer.MAX_VALUE))", "case 5"),
            ]
        ),
        "entry_point": "incrList",
    },
    cpp={
        "header": CPP_COMMON_HEADER,
        "docstring": cpp_doc(
            [
                "Return the vector with its elements incremented by 1.",
                ">>> incr_list({1, 2, 3})",
                "{2, 3, 4}",
                ">>> incr_list({5, 3, 5, 2, 3, 3, 9, 0, 123})",
                "{6, 4, 6, 3, 4, 4, 10, 1, 124}",
            ]
        ),
        "signature": "vector<int> incr_list(vector<int> numbers) {\n",
        "solution": (
            "    vector<int> result;\n"
            "    for (int i = 0; i < (int)numbers.size(); i++) {\n"
            "        result.push_back(numbers[i] + 1);\n"
            "    }\n"
            "    return result;\n"
            "}\n"
        ),
        "test": cpp_test(
            [
                "assert(incr_list(vector<int>()) == vector<int>());",
                "assert(incr_list({3, 2, 1}) == vector<int>({4, 3, 2}));",
                "assert(incr_list({5, 2, 5, 2, 3, 3, 9, 0, 123}) == vector<int>({6, 3, 6, 3, 4, 4, 10, 1, 124}));",
                "assert(incr_list({-1}) == vector<int>({0}));",
                "assert(incr_list({-100}) == vector<int>({-99}));",
            ]
        ),
        "entry_point": "incr_list",
    },
    js={
        "header": "",
        "docstring": js_doc(
            [
                "Return the list with its elements incremented by 1.",
                ">>> incrList([1, 2, 3])",
                "[2, 3, 4]",
                ">>> incrList([5, 3, 5, 2, 3, 3, 9, 0, 123])",
                "[6, 4, 6, 3, 4, 4, 10, 1, 124]",
            ]
        ),
        "signature": "function incrList(numbers) {\n",
        "solution": (
            "    let result = [];\n"
            "    for (let i = 0; i < numbers.length; i++) {\n"
            "        result.push(numbers[i] + 1);\n"
            "    }\n"
            "    return result;\n"
            "}\n"
        ),
        "test": js_test(
            [
                "assert.deepStrictEqual(incrList([]), []);",
                "assert.deepStrictEqual(incrList([3, 2, 1]), [4, 3, 2]);",
                "assert.deepStrictEqual(incrList([5, 2, 5, 2, 3, 3, 9, 0, 123]), [6, 3, 6, 3, 4, 4, 10, 1, 124]);",
                "assert.deepStrictEqual(incrList([-1]), [0]);",
                "assert.deepStrictEqual(incrList([-100]), [-99]);",
            ]
        ),
        "entry_point": "incrList",
    },
)

# ----------------------------------------------------------------------
# HumanEval_60: sum_to_n
# ----------------------------------------------------------------------
task(
    "HumanEval_60",
    java={
        "header": JAVA_HEADER,
        "docstring": java_doc(
            [
                "Compute the sum of all numbers from 1 up to n.",
                ">>> sumToN(30)",
                "465",
                ">>> sumToN(10)",
                "55",
            ]
        ),
        "signature": "    public static int sumToN(int n) {\n",
        "solution": (
            "        int total = 0;\n"
            "        for (int i = 1; i <= n; i++) {\n"
            "            total += i;\n"
            "        }\n"
            "        return total;\n"
            "    }\n"
            "}\n"
        ),
        "test": java_test(
            [
                java_check("Solution.sumToN(1) == 1", "case 1"),
                java_check("Solution.sumToN(6) == 21", "case 2"),
                java_check("Solution.sumToN(11) == 66", "case 3"),
                java_check("Solution.sumToN(30) == 465", "case 4"),
                java_check("Solution.sumToN(100) == 5050", "case 5"),
                java_check("Solution.sumToN(0) == 0", "case 6"),
            ]
        ),
        "entry_point": "sumToN",
    },
    cpp={
        "header": CPP_COMMON_HEADER,
        "docstring": cpp_doc(
            [
                "Compute the sum of all numbers from 1 up to n.",
                ">>> sum_to_n(30)",
                "465",
                ">>> sum_to_n(10)",
                "55",
            ]
        ),
        "signature": "int sum_to_n(int n) {\n",
        "solution": (
            "    int total = 0;\n"
            "    for (int i = 1; i <= n; i++) {\n"
            "        total += i;\n"
            "    }\n"
            "    return total;\n"
            "}\n"
        ),
        "test": cpp_test(
            [
                "assert(sum_to_n(1) == 1);",
                "assert(sum_to_n(6) == 21);",
                "assert(sum_to_n(11) == 66);",
                "assert(sum_to_n(30) == 465);",
                "assert(sum_to_n(100) == 5050);",
                "assert(sum_to_n(0) == 0);",
            ]
        ),
        "entry_point": "sum_to_n",
    },
    js={
        "header": "",
        "docstring": js_doc(
            [
                "Compute the sum of all numbers from 1 up to n.",
                ">>> sumToN(30)",
                "465",
                ">>> sumToN(10)",
                "55",
            ]
        ),
        "signature": "function sumToN(n) {\n",
        "solution": (
            "    let total = 0;\n"
            "    for (let i = 1; i <= n; i++) {\n"
            "        total += i;\n"
            "    }\n"
            "    return total;\n"
            "}\n"
        ),
        "test": js_test(
            [
                "assert.strictEqual(sumToN(1), 1);",
                "assert.strictEqual(sumToN(6), 21);",
                "assert.strictEqual(sumToN(11), 66);",
                "assert.strictEqual(sumToN(30), 465);",
                "assert.strictEqual(sumToN(100), 5050);",
                "assert.strictEqual(sumToN(0), 0);",
            ]
        ),
        "entry_point": "sumToN",
    },
)


# Canonical corpus order (matches the loader's language, id sort).
LANGUAGE_RANK = {"java": 0, "cpp": 1, "javascript": 2}


def main():
    out_path = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "fixtures", "mini_corpus.jsonl")
    out_path = os.path.normpath(out_path)
    records = sorted(TASKS, key=lambda r: (LANGUAGE_RANK[r["language"]], r["task_id"]))
    lines = []
    for record in records:
        for key, value in record.items():
            if value is None:
                raise SystemExit(f"missing field {key} in {record['task_id']}/{record['language']}")
        lines.append(json.dumps(record, ensure_ascii=True, separators=(",", ":")))
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} records to {out_path}")


if __name__ == "__main__":
    main()
