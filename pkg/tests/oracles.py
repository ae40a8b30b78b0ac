"""Slow, independent reference implementations used by the tests."""

import random

from kpeval.porter import stem

VOCAB = [
    "graph", "graphs", "graphing", "network", "networks", "neural", "model", "models",
    "ranking", "rank", "image", "images", "segmentation", "topic", "topics", "learning",
    "deep", "system", "systems", "design", "data", "keyphrase", "generation",
]


def brute_f1_at_k(pred, gold, k):
    def canon(phrases):
        out = []
        for ph in phrases:
            c = " ".join(stem(w.lower()) for w in ph.split())
            if c not in out:
                out.append(c)
        return out

    p_list = canon(pred)[:k]
    g_list = canon(gold)
    hits = 0
    for p in p_list:
        for g in g_list:
            if p == g:
                hits += 1
    prec = hits / len(p_list) if p_list else 0.0
    rec = hits / len(g_list)
    f1 = 2 * prec * rec / (prec + rec) if prec + rec > 0 else 0.0
    return prec, rec, f1


def lcs_table(a, b):
    t = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                t[i][j] = t[i - 1][j - 1] + 1
            else:
                t[i][j] = max(t[i - 1][j], t[i][j - 1])
    return t[len(a)][len(b)]


def oracle_rougel(a, b):
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    lcs = lcs_table(a, b)
    p, r = lcs / len(a), lcs / len(b)
    return 2 * p * r / (p + r) if lcs else 0.0


def random_phrases(rng: random.Random, lo=0, hi=9):
    return [" ".join(rng.choice(VOCAB) for _ in range(rng.randint(1, 3))) for _ in range(rng.randint(lo, hi))]


def power_iteration(w, damping=0.85, iters=10000, tol=1e-15):
    """Plain-Python weighted PageRank run to convergence."""
    n = len(w)
    out = [sum(row) for row in w]
    x = [1.0 / n] * n
    for _ in range(iters):
        dang = sum(x[i] for i in range(n) if out[i] == 0)
        nxt = []
        for j in range(n):
            s = sum(x[i] * w[i][j] / out[i] for i in range(n) if out[i] > 0)
            nxt.append((1 - damping) / n + damping * (s + dang / n))
        done = sum(abs(a - b) for a, b in zip(nxt, x)) < tol
        x = nxt
        if done:
            break
    tot = sum(x)
    return [v / tot for v in x]
