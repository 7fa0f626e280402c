#!/usr/bin/env python3
"""Regenerate the bundled toy corpus, manifest and benchmark under data/toy/.

The content is fully deterministic so the files only change when this script
does. Texts deliberately contain double quotes and runs of spaces to give the
preprocessor something to do.
"""
import json
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "toy")

HI_WORDS = ["पानी", "किताब", "शहर", "भोजन", "यात्रा", "कानून", "गणित", "विज्ञान"]
EN_WORDS = ["water", "book", "city", "food", "travel", "law", "math", "science"]


def word(lang, i):
    words = HI_WORDS if lang == "hi" else EN_WORDS
    return words[i % len(words)]


def sample(sid, task, fields, options, output, lang, domain, source, cultural):
    return {
        "id": sid,
        "task": task,
        "input_fields": fields,
        "options": options,
        "output": output,
        "language": lang,
        "domain": domain,
        "source": source,
        "is_cultural": cultural,
    }


def cultural_rows():
    rows = []
    blocks = [
        ("India Law", "Legal FAQ", 12, "long_response"),
        ("India Recipe", "Cooking Recipes", 8, "direct_response"),
        ("India Travel", "Travel FAQ", 6, "long_response"),
        ("India TAX", "Tax FAQ", 6, "direct_response"),
        ("India UPSC", "General Knowledge", 4, "direct_response"),
    ]
    for source, domain, count, task in blocks:
        slug = source.lower().replace(" ", "-")
        for i in range(count):
            lang = "hi" if i % 2 == 0 else "en"
            q = f'What does  "{word(lang, i)}" mean in {domain.lower()} item {i}?'
            rows.append(
                sample(
                    f"{slug}-{i:03d}", task, [q], [],
                    f"Answer about {word(lang, i + 1)} number {i}.",
                    lang, domain, source, True,
                )
            )
    return rows


def generic_rows():
    rows = []

    def add(source, domain, count, build):
        slug = source.lower().replace(" ", "-")
        for i in range(count):
            lang = "hi" if i % 2 == 0 else "en"
            rows.append(build(f"{slug}-{i:03d}", i, lang, source, domain))

    add("Toy NLI", "NLI", 40, lambda sid, i, lang, src, dom: sample(
        sid, "nli",
        [f"The {word(lang, i)} is here today.", f"A {word(lang, i + 2)} was  seen."],
        [], "neutral" if i % 3 else "entailment", lang, dom, src, False))

    add("Toy MCQ", "General", 40, lambda sid, i, lang, src, dom: sample(
        sid, "mcq",
        [f"Pick the word closest to {word(lang, i)} (case {i})."],
        [word(lang, i + j) for j in range(2 + i % 3)],
        word(lang, i + i % (2 + i % 3)), lang, dom, src, False))

    add("Toy Math", "Math", 30, lambda sid, i, lang, src, dom: sample(
        sid, "numeric", [f"What is {i} + {i % 7}?"], [],
        str(i + i % 7), lang, dom, src, False))

    add("Toy Boolean", "General", 16, lambda sid, i, lang, src, dom: sample(
        sid, "boolean", [f'Is "{word(lang, i)}" item number {i} even?'], [],
        ("हाँ" if lang == "hi" else "Yes") if i % 2 == 0 else ("नहीं" if lang == "hi" else "No"),
        lang, dom, src, False))

    add("Toy Code", "Coding", 8, lambda sid, i, lang, src, dom: sample(
        sid, "code", [f"Write a function returning {i} squared."], [],
        f"def square_{i}():\n    return {i * i}", lang, dom, src, False))

    add("Toy Translate", "Translation", 10, lambda sid, i, lang, src, dom: sample(
        sid, f"translation[{'hi' if lang == 'en' else 'en'}]",
        [f"The {word('en', i)} is large."], [],
        f"{word('hi', i)} बड़ा है।" if lang == "en" else f"The {word('en', i)} is large.",
        lang, dom, src, False))

    add("Toy Summarize", "Summarization", 12, lambda sid, i, lang, src, dom: sample(
        sid, "summarize",
        [f"Long passage {i} about {word(lang, i)}, {word(lang, i + 1)} and {word(lang, i + 2)}. " * 2],
        [], f"Passage {i} summary.", lang, dom, src, False))

    add("Toy Paraphrase", "Paraphrasing", 10, lambda sid, i, lang, src, dom: sample(
        sid, "paraphrase", [f"The {word(lang, i)} stands near the {word(lang, i + 3)}."], [],
        f"Near the {word(lang, i + 3)} stands the {word(lang, i)}.", lang, dom, src, False))

    add("Toy Simplify", "Simplification", 10, lambda sid, i, lang, src, dom: sample(
        sid, "simplify", [f"Utilization of {word(lang, i)} facilitates outcome {i}."], [],
        f"Using {word(lang, i)} helps.", lang, dom, src, False))

    add("Toy Direct", "General", 8, lambda sid, i, lang, src, dom: sample(
        sid, "direct_response", [f"Name item {i}."], [], word(lang, i), lang, dom, src, False))

    add("Toy Long", "General", 8, lambda sid, i, lang, src, dom: sample(
        sid, "long_response", [f"Explain {word(lang, i)} in detail (case {i})."], [],
        f"A long explanation of {word(lang, i)}. " * 3, lang, dom, src, False))

    add("Toy Numeric", "Math", 8, lambda sid, i, lang, src, dom: sample(
        sid, "numeric", [f"How many letters in {word('en', i)}?"], [],
        str(len(word("en", i))), lang, dom, src, False))

    return rows


MANIFEST = """source,total,used,hindi_ratio
India Law,12,12,N/A
India Recipe,8,8,N/A
India Travel,6,6,N/A
India TAX,6,6,N/A
India UPSC,4,4,N/A
Toy NLI,40,20,50
Toy MCQ,40,20,80
Toy Math,30,16,50
Toy Boolean,16,16,N/A
Toy Code,8,8,N/A
Toy Translate,10,10,N/A
Toy Summarize,12,12,N/A
Toy Paraphrase,10,10,N/A
Toy Simplify,10,10,N/A
Toy Direct,8,8,N/A
Toy Long,8,8,N/A
Toy Numeric,8,8,N/A
"""


def benchmark_items():
    items = []
    domains = ["Health", "Law", "Math", "CS"]
    for benchmark in ["ARC-C", "ARC-E", "BoolQ", "CMCQ", "MMLU"]:
        for lang in ["en", "hi"]:
            for i in range(4):
                iid = f"{benchmark.lower().replace('-', '')}-{lang}-{i}"
                if benchmark == "BoolQ":
                    choices = ["Yes", "No"] if lang == "en" else ["हाँ", "नहीं"]
                    items.append({
                        "id": iid, "benchmark": benchmark,
                        "question": f'Does  "{word(lang, i)}" appear in statement {i}?',
                        "choices": choices, "gold_index": i % 2, "language": lang,
                    })
                    continue
                n = 3 + (i % 2)
                item = {
                    "id": iid, "benchmark": benchmark,
                    "question": f"Which option relates to {word(lang, i)} (q{i})?",
                    "choices": [f"{word(lang, i + j)} {j}" for j in range(n)],
                    "gold_index": i % n, "language": lang,
                }
                if benchmark == "CMCQ":
                    item["context"] = f"Context passage {i}: the {word(lang, i)} appears twice."
                if benchmark == "MMLU":
                    item["domain"] = domains[i % len(domains)]
                items.append(item)
    return items


def main():
    os.makedirs(OUT, exist_ok=True)
    rows = cultural_rows() + generic_rows()
    with open(os.path.join(OUT, "corpus.jsonl"), "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")) + "\n")
    with open(os.path.join(OUT, "manifest.csv"), "w", encoding="utf-8") as fh:
        fh.write(MANIFEST)
    with open(os.path.join(OUT, "benchmark.jsonl"), "w", encoding="utf-8") as fh:
        for item in benchmark_items():
            fh.write(json.dumps(item, ensure_ascii=False, separators=(",", ":")) + "\n")
    with open(os.path.join(OUT, "coverage.txt"), "w", encoding="utf-8") as fh:
        fh.write("Health = Yes\nLaw = Yes\nMath = Yes\nCS = N/A\nOther = No\n")
    print(f"wrote {len(rows)} corpus rows and {len(benchmark_items())} benchmark items to {OUT}")


if __name__ == "__main__":
    main()
