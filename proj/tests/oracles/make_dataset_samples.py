"""Writes small dataset samples shaped like the query-focused corpora and
their expected statistics, counted independently of the library.

qmsum_sample.jsonl: meetings with several queries each, one reference per
query; the transcript is only repeated on the first record of a meeting.
squality_sample.jsonl: stories with several questions, four references each.
"""
import json
import pathlib
import random
import re

WORDS = ("the committee said we'll review budget item 3 next week and Sarah's team "
         "agreed that costs rose by 12 percent so marketing wants a cheaper remote "
         "control design while engineers prefer rubber buttons").split()


def words(text):
    return [t for t in re.findall(r"[A-Za-z0-9]+|[^\sA-Za-z0-9]", text) if re.match(r"[A-Za-z0-9]", t)]


def sentence(rng, lo, hi):
    n = rng.randint(lo, hi)
    s = " ".join(rng.choice(WORDS) for _ in range(n))
    return s[0].upper() + s[1:] + rng.choice([".", "?", "!", "..."])


def text(rng, sentences, lo=4, hi=16):
    return " ".join(sentence(rng, lo, hi) for _ in range(sentences))


def transcript(rng, turns):
    speakers = ["Project Manager", "Marketing", "User Interface", "Industrial Designer"]
    return "\n".join(f"{rng.choice(speakers)}: {text(rng, rng.randint(1, 3))}" for _ in range(turns))


def main():
    rng = random.Random(20260101)
    root = pathlib.Path(__file__).resolve().parent.parent / "data" / "stats"
    root.mkdir(parents=True, exist_ok=True)
    expected = {}

    rows, doc_words, summary_words, examples = [], {}, [], 0
    doc_total = 0
    for m in range(7):
        doc_id = f"meeting{m}"
        doc = transcript(rng, rng.randint(8, 20))
        doc_words[doc_id] = len(words(doc))
        for q in range(rng.randint(2, 4)):
            summary = text(rng, rng.randint(1, 4))
            row = {"doc_id": doc_id, "query_id": f"q{q}", "query": sentence(rng, 3, 8), "summary": summary}
            if q == 0:
                row["document"] = doc
            rows.append(row)
            examples += 1
            doc_total += doc_words[doc_id]
            summary_words.append(len(words(summary)))
    with open(root / "qmsum_sample.jsonl", "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")
    expected["qmsum_sample.jsonl"] = {
        "examples": examples, "documents": len(doc_words), "references": len(summary_words),
        "document_words_total": doc_total, "summary_words_total": sum(summary_words),
        "mean_document_words": doc_total / examples,
        "mean_summary_words": sum(summary_words) / len(summary_words)}

    rows, doc_words, summary_words, examples, doc_total = [], {}, [], 0, 0
    for s in range(5):
        doc_id = f"story{s}"
        doc = "\n\n".join(text(rng, rng.randint(3, 6)) for _ in range(rng.randint(4, 8)))
        doc_words[doc_id] = len(words(doc))
        for q in range(rng.randint(1, 3)):
            refs = [text(rng, rng.randint(2, 5)) for _ in range(4)]
            rows.append({"doc_id": doc_id, "query_id": f"q{q}", "document": doc, "summaries": refs})
            examples += 1
            doc_total += doc_words[doc_id]
            summary_words.extend(len(words(r)) for r in refs)
    with open(root / "squality_sample.jsonl", "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")
    expected["squality_sample.jsonl"] = {
        "examples": examples, "documents": len(doc_words), "references": len(summary_words),
        "document_words_total": doc_total, "summary_words_total": sum(summary_words),
        "mean_document_words": doc_total / examples,
        "mean_summary_words": sum(summary_words) / len(summary_words)}

    with open(root / "expected_stats.json", "w", encoding="utf-8") as f:
        json.dump(expected, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
