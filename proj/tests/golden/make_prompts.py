#!/usr/bin/env python3
"""Regenerate the golden prompt files from the bundled corpus.

Written independently of the C++ prompt builder so the two can check each
other. One file per support set, prompting with the first requirement of the
test set for the same rule.
"""
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[2]
CORPUS = ROOT / "fixtures" / "paper_corpus"
OUT = pathlib.Path(__file__).resolve().parent / "prompts"


def records(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def main():
    index = json.loads((CORPUS / "index.json").read_text(encoding="utf-8"))
    requirements = {r["id"]: r["text"] for r in records(CORPUS / index["requirements"])}
    first_query = {t["rule"]: requirements[t["requirement_ids"][0]]
                   for t in records(CORPUS / index["test_sets"])}
    OUT.mkdir(exist_ok=True)
    for entry in index["support_sets"]:
        header = json.loads((CORPUS / entry["header"]).read_text(encoding="utf-8"))
        parts = []
        for pair in records(CORPUS / entry["pairs"]):
            parts.append("Translate input to DSL\nInput: %s\nDSL: %s\n###\n" % (pair["input"], pair["dsl"]))
        parts.append("Translate input to DSL\nInput: %s\nDSL:" % first_query[header["rule"]])
        with open(OUT / (header["id"] + ".txt"), "w", encoding="utf-8", newline="") as f:
            f.write("".join(parts))


if __name__ == "__main__":
    main()
