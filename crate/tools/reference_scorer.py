#!/usr/bin/env python3
"""Reference scorer used to pin golden metric values.

Independent implementation of corpus BLEU (13a tokenization, exponential
smoothing of zero n-gram counts, standard brevity penalty) and corpus
chrF++ (character n-grams up to order 6 over whitespace-stripped text,
word n-grams up to order 2, beta 2, effective-order averaging).  These are
the default signatures of the standard scorers used across MT evaluation.

The Rust crate never calls this file; it exists so the frozen values in
fixtures/goldens/metrics/ can be regenerated and audited:

    python3 tools/reference_scorer.py selftest
    python3 tools/reference_scorer.py score fixtures/goldens/metrics/corpus20.jsonl
"""

import json
import math
import re
import string
import sys
from collections import Counter

MAX_BLEU_ORDER = 4
CHRF_CHAR_ORDER = 6
CHRF_WORD_ORDER = 2
CHRF_BETA = 2

# ---------------------------------------------------------------------------
# 13a tokenization
# ---------------------------------------------------------------------------

_13A_RULES = [
    # pad ASCII punctuation except ' , - . and digits/letters
    (re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])"), r" \1 "),
    # period/comma not preceded by a digit
    (re.compile(r"([^0-9])([\.,])"), r"\1 \2 "),
    # period/comma not followed by a digit
    (re.compile(r"([\.,])([^0-9])"), r" \1 \2"),
    # dash preceded by a digit
    (re.compile(r"([0-9])(-)"), r"\1 \2 "),
]


def tokenize_13a(line):
    line = line.replace("<skipped>", "")
    line = line.replace("-\n", "")
    line = line.replace("\n", " ")
    if "&" in line:
        line = line.replace("&quot;", '"')
        line = line.replace("&amp;", "&")
        line = line.replace("&lt;", "<")
        line = line.replace("&gt;", ">")
    line = f" {line} "
    for pattern, repl in _13A_RULES:
        line = pattern.sub(repl, line)
    return line.split()


# ---------------------------------------------------------------------------
# BLEU
# ---------------------------------------------------------------------------


def _ngram_counts(tokens, n):
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(hypotheses, reference_streams):
    """reference_streams: list of reference lists, one list per stream."""
    correct = [0] * MAX_BLEU_ORDER
    total = [0] * MAX_BLEU_ORDER
    hyp_len = 0
    ref_len = 0

    for i, hyp in enumerate(hypotheses):
        hyp_tokens = tokenize_13a(hyp)
        ref_token_lists = [tokenize_13a(stream[i]) for stream in reference_streams]
        hyp_len += len(hyp_tokens)
        # closest reference length (ties resolved toward the shorter one)
        ref_len += min(
            (abs(len(r) - len(hyp_tokens)), len(r)) for r in ref_token_lists
        )[1]

        for n in range(1, MAX_BLEU_ORDER + 1):
            hyp_ngrams = _ngram_counts(hyp_tokens, n)
            merged = Counter()
            for ref_tokens in ref_token_lists:
                for ngram, count in _ngram_counts(ref_tokens, n).items():
                    merged[ngram] = max(merged[ngram], count)
            for ngram, count in hyp_ngrams.items():
                correct[n - 1] += min(count, merged[ngram])
                total[n - 1] += count

    if hyp_len == 0 and ref_len == 0:
        raise ValueError("empty corpus")

    if hyp_len < ref_len:
        bp = math.exp(1 - ref_len / hyp_len) if hyp_len > 0 else 0.0
    else:
        bp = 1.0

    precisions = [0.0] * MAX_BLEU_ORDER
    smooth = 1.0
    for n in range(1, MAX_BLEU_ORDER + 1):
        if total[n - 1] == 0:
            break
        if correct[n - 1] == 0:
            smooth *= 2
            precisions[n - 1] = 100.0 / (smooth * total[n - 1])
        else:
            precisions[n - 1] = 100.0 * correct[n - 1] / total[n - 1]

    log_sum = sum(
        math.log(p) if p > 0.0 else -9999999999 for p in precisions
    )
    score = bp * math.exp(log_sum / MAX_BLEU_ORDER)
    return {
        "score": score,
        "precisions": precisions,
        "brevity_penalty": bp,
        "hyp_len": hyp_len,
        "ref_len": ref_len,
    }


# ---------------------------------------------------------------------------
# chrF++
# ---------------------------------------------------------------------------

_PUNCTS = set(string.punctuation)


def _chrf_words(line):
    tokens = []
    for w in line.split():
        if len(w) == 1:
            tokens.append(w)
        elif w[-1] in _PUNCTS:
            tokens.extend([w[:-1], w[-1]])
        elif w[0] in _PUNCTS:
            tokens.extend([w[0], w[1:]])
        else:
            tokens.append(w)
    return tokens


def _char_ngrams(line, n):
    squeezed = "".join(line.split())
    return Counter(squeezed[i : i + n] for i in range(len(squeezed) - n + 1))


def _word_ngrams(tokens, n):
    return Counter(
        " ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1)
    )


def _segment_stats(hyp, ref):
    stats = []
    hyp_words = _chrf_words(hyp)
    ref_words = _chrf_words(ref)
    for n in range(1, CHRF_CHAR_ORDER + 1):
        stats.append((_char_ngrams(hyp, n), _char_ngrams(ref, n)))
    for n in range(1, CHRF_WORD_ORDER + 1):
        stats.append((_word_ngrams(hyp_words, n), _word_ngrams(ref_words, n)))
    out = []
    for hyp_ngrams, ref_ngrams in stats:
        match = sum(
            min(count, ref_ngrams[ng]) for ng, count in hyp_ngrams.items()
        )
        out.append([sum(hyp_ngrams.values()), sum(ref_ngrams.values()), match])
    return out


def corpus_chrfpp(hypotheses, references):
    order = CHRF_CHAR_ORDER + CHRF_WORD_ORDER
    totals = [[0, 0, 0] for _ in range(order)]
    for hyp, ref in zip(hypotheses, references):
        for i, triple in enumerate(_segment_stats(hyp, ref)):
            for j in range(3):
                totals[i][j] += triple[j]

    factor = CHRF_BETA**2
    avg_prec = 0.0
    avg_rec = 0.0
    effective = 0
    for n_hyp, n_ref, n_match in totals:
        if n_hyp > 0 and n_ref > 0:
            avg_prec += n_match / n_hyp
            avg_rec += n_match / n_ref
            effective += 1

    if effective == 0:
        return {"score": 0.0}
    avg_prec /= effective
    avg_rec /= effective
    if avg_prec + avg_rec == 0.0:
        return {"score": 0.0}
    score = (1 + factor) * avg_prec * avg_rec / (factor * avg_prec + avg_rec)
    return {"score": 100.0 * score}


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------


def selftest():
    # Canonical corpus-BLEU vector (two reference streams): the expected
    # values below can be verified by hand from the 13a token counts.
    hyps = [
        "The dog bit the man.",
        "It wasn't surprising.",
        "The man had just bitten him.",
    ]
    refs = [
        ["The dog bit the man.", "It was not unexpected.", "The man bit him first."],
        ["The dog had bit the man.", "No one was surprised.", "The man had bitten the dog."],
    ]
    got = corpus_bleu(hyps, refs)
    assert abs(got["score"] - 48.530827009929865) < 1e-9, got
    assert got["hyp_len"] == 17 and got["ref_len"] == 18, got
    expected_prec = [14 / 17, 7 / 14, 5 / 11, 3 / 8]
    for p, e in zip(got["precisions"], expected_prec):
        assert abs(p - 100 * e) < 1e-9, got
    assert abs(got["brevity_penalty"] - math.exp(1 - 18 / 17)) < 1e-12

    # Exact-fraction chrF++ checks.
    assert corpus_chrfpp(["cat"], ["cat"])["score"] == 100.0
    got = corpus_chrfpp(["ab"], ["ac"])["score"]
    # orders: char-1 p=r=1/2, char-2 p=r=0, word-1 p=r=0 -> avg 1/6
    assert abs(got - 100.0 / 6.0) < 1e-9, got

    got = corpus_bleu(["a b c"], [["x y z w v"]])
    assert got["score"] == 0.0, got
    print("selftest ok")


def score_file(path):
    hyps, refs = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            hyps.append(obj["hypothesis"])
            refs.append(obj["reference"])
    bleu = corpus_bleu(hyps, [refs])
    chrf = corpus_chrfpp(hyps, refs)
    print(json.dumps({"bleu": bleu, "chrfpp": chrf}, indent=2))


if __name__ == "__main__":
    if len(sys.argv) >= 2 and sys.argv[1] == "selftest":
        selftest()
    elif len(sys.argv) >= 3 and sys.argv[1] == "score":
        score_file(sys.argv[2])
    else:
        print(__doc__)
        sys.exit(1)
