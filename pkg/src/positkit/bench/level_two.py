"""Small machine-learning kernels on Iris, written against ScalarBackend.

Each kernel returns its decisions (labels, cluster ids, coefficients, a
checksum) so runs on different backends can be compared directly.  Integer
bookkeeping (counts, indices, votes) stays in Python; every real-valued
operation goes through the backend.
"""
from __future__ import annotations

import csv
import os
import random
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .backends import ScalarBackend
from .report import BenchReport, render_value

__all__ = [
    "DATA_DIR_ENV",
    "IrisData",
    "load_iris",
    "matrix_multiply",
    "k_means",
    "k_nearest",
    "linear_regression",
    "naive_bayes",
    "classification_tree",
    "LEVEL_TWO",
    "level_two_suite",
    "run_level_two",
    "decisions_equal",
]

DATA_DIR_ENV = "POSITKIT_DATA_DIR"
MM_SEED = 182


@dataclass(frozen=True)
class IrisData:
    features: tuple[tuple[str, ...], ...]  # decimal text, kept exact
    labels: tuple[int, ...]
    classes: tuple[str, ...]


def load_iris(path: str | os.PathLike | None = None) -> IrisData:
    """Read the Iris CSV (four numeric columns then a label, no header).

    Lookup order: explicit ``path``, ``$POSITKIT_DATA_DIR/iris.csv``, the
    copy shipped with the package.
    """
    if path is None and os.environ.get(DATA_DIR_ENV):
        path = Path(os.environ[DATA_DIR_ENV]) / "iris.csv"
    if path is None:
        text = resources.files("positkit.bench").joinpath("data/iris.csv").read_text()
    else:
        p = Path(path)
        if not p.is_file():
            raise FileNotFoundError(f"Iris dataset not found: {p}")
        text = p.read_text()
    feats, names = [], []
    for row in csv.reader(text.splitlines()):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 5:
            raise ValueError(f"expected 5 columns, got {len(row)}: {row}")
        feats.append(tuple(c.strip() for c in row[:4]))
        names.append(row[4].strip())
    classes = tuple(dict.fromkeys(names))
    labels = tuple(classes.index(n) for n in names)
    return IrisData(tuple(feats), labels, classes)


def _load(backend: ScalarBackend, data: IrisData) -> list[list]:
    return [[backend.store(backend.const(v)) for v in row] for row in data.features]


def _sq_dist(b: ScalarBackend, x, y):
    acc = b.from_int(0)
    for xi, yi in zip(x, y):
        d = b.sub(xi, yi)
        acc = b.add(acc, b.mul(d, d))
    return acc


def _argmin(b: ScalarBackend, values) -> int:
    """Index of the smallest value; first one wins ties, unordered never wins."""
    best = None
    for i, v in enumerate(values):
        if best is None or b.compare(v, values[best]) == -1:
            best = i
    return best


# ---------------------------------------------------------------- MM

def _mm_inputs(n: int, seed: int) -> tuple[list[list[str]], list[list[str]]]:
    rng = random.Random(seed)
    a = [[f"0.{rng.randrange(100):02d}" for _ in range(n)] for _ in range(n)]
    b = [[f"0.{rng.randrange(100):02d}" for _ in range(n)] for _ in range(n)]
    return a, b


def matrix_multiply(b: ScalarBackend, n: int = 182, seed: int = MM_SEED) -> dict:
    """C = A @ B for seeded n-by-n inputs; returns a checksum of C."""
    at, bt = _mm_inputs(n, seed)
    a = [[b.store(b.const(v)) for v in row] for row in at]
    cols = [[b.store(b.const(bt[i][j])) for i in range(n)] for j in range(n)]
    total = b.from_int(0)
    for row in a:
        for col in cols:
            total = b.add(total, b.store(b.dot(row, col)))
    return {"checksum": render_value(b.to_binary64(total), 12)}


# ---------------------------------------------------------------- KM

def k_means(b: ScalarBackend, data: IrisData, k: int = 3, init=(0, 50, 100), max_sweeps: int = 100) -> dict:
    """Lloyd iterations from fixed seed rows; squared Euclidean distance."""
    x = _load(b, data)
    centroids = [list(x[i]) for i in init[:k]]
    assign: list[int] | None = None
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        new = [_argmin(b, [_sq_dist(b, row, c) for c in centroids]) for row in x]
        if new == assign:
            break
        assign = new
        for c in range(k):
            members = [row for row, a in zip(x, assign) if a == c]
            if not members:
                continue
            count = b.from_int(len(members))
            for j in range(len(centroids[c])):
                s = b.from_int(0)
                for row in members:
                    s = b.add(s, row[j])
                centroids[c][j] = b.store(b.div(s, count))
    return {"assignments": assign, "sweeps": sweeps}


# ---------------------------------------------------------------- KNN

def k_nearest(b: ScalarBackend, data: IrisData, k: int = 5) -> dict:
    """Leave-one-out majority vote among the ``k`` nearest rows.

    Vote ties go to the tied class whose nearest member is closest.
    """
    x = _load(b, data)
    y = data.labels
    preds = []
    for i, row in enumerate(x):
        dists = [(_sq_dist(b, row, other), j) for j, other in enumerate(x) if j != i]
        chosen: list[tuple] = []
        for d, j in dists:
            pos = len(chosen)
            while pos > 0 and b.compare(d, chosen[pos - 1][0]) == -1:
                pos -= 1
            if pos < k:
                chosen.insert(pos, (d, j))
                del chosen[k:]
        votes: dict[int, int] = {}
        for _, j in chosen:
            votes[y[j]] = votes.get(y[j], 0) + 1
        top = max(votes.values())
        preds.append(next(y[j] for _, j in chosen if votes[y[j]] == top))
    return {"labels": preds}


# ---------------------------------------------------------------- LR

def _det(b: ScalarBackend, m: list[list]):
    """Determinant by cofactor expansion along the first row."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return b.sub(b.mul(m[0][0], m[1][1]), b.mul(m[0][1], m[1][0]))
    acc = b.from_int(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = b.mul(m[0][j], _det(b, minor))
        acc = b.add(acc, term) if j % 2 == 0 else b.sub(acc, term)
    return acc


def linear_regression(b: ScalarBackend, data: IrisData, target: int = 3) -> dict:
    """Least squares for column ``target`` on the other columns plus an
    intercept.

    Columns are centred on their means, the normal equations of the centred
    problem are solved by Cramer's rule, and the intercept is recovered
    from the means.  Without centring the determinant cancels away most of
    a binary32 significand.
    """
    x = _load(b, data)
    n = b.from_int(len(x))
    yv = [row[target] for row in x]
    cols = [[row[j] for row in x] for j in range(len(x[0])) if j != target]

    def mean(v):
        s = b.from_int(0)
        for t in v:
            s = b.add(s, t)
        return b.div(s, n)

    y_mean = mean(yv)
    means = [mean(c) for c in cols]
    yc = [b.sub(t, y_mean) for t in yv]
    cc = [[b.sub(t, m) for t in c] for c, m in zip(cols, means)]
    p = len(cc)
    xtx = [[b.store(b.dot(cc[i], cc[j])) for j in range(p)] for i in range(p)]
    xty = [b.store(b.dot(cc[i], yc)) for i in range(p)]
    det = _det(b, xtx)
    coef = []
    for i in range(p):
        mi = [[xty[r] if c == i else xtx[r][c] for c in range(p)] for r in range(p)]
        coef.append(b.div(_det(b, mi), det))
    intercept = y_mean
    for beta, m in zip(coef, means):
        intercept = b.sub(intercept, b.mul(beta, m))
    return {
        "coefficients": [render_value(b.to_binary64(c), 12) for c in [intercept] + coef],
        "determinant": render_value(b.to_binary64(det), 12),
    }


# ---------------------------------------------------------------- NB

def _ln(b: ScalarBackend, x, terms: int = 12):
    """Natural log for positive ``x``: halve/double into [0.75, 1.5) then
    ln(r) = 2*atanh((r-1)/(r+1)) by series."""
    one = b.from_int(1)
    two = b.from_int(2)
    lo = b.const("0.75")
    hi = b.const("1.5")
    ln2 = b.const("0.693147180559945309417232121458176568")
    m = 0
    r = x
    while b.compare(r, hi) != -1:
        r = b.div(r, two)
        m += 1
    while b.compare(r, lo) == -1:
        r = b.mul(r, two)
        m -= 1
    y = b.div(b.sub(r, one), b.add(r, one))
    y2 = b.mul(y, y)
    power = y
    s = y
    for k in range(1, terms):
        power = b.mul(power, y2)
        s = b.add(s, b.div(power, b.from_int(2 * k + 1)))
    return b.add(b.mul(b.from_int(m), ln2), b.mul(two, s))


def naive_bayes(b: ScalarBackend, data: IrisData) -> dict:
    """Gaussian naive Bayes, trained and evaluated on the full set.

    Score per class: sum over features of (x-mu)^2/var + ln(var); the
    smallest score wins (equal class priors).
    """
    x = _load(b, data)
    y = data.labels
    nclass = len(data.classes)
    nfeat = len(x[0])
    mu, var, logvar = [], [], []
    for c in range(nclass):
        rows = [r for r, lab in zip(x, y) if lab == c]
        cnt = b.from_int(len(rows))
        mc, vc, lc = [], [], []
        for j in range(nfeat):
            s = b.from_int(0)
            for r in rows:
                s = b.add(s, r[j])
            m = b.div(s, cnt)
            ss = b.from_int(0)
            for r in rows:
                d = b.sub(r[j], m)
                ss = b.add(ss, b.mul(d, d))
            v = b.div(ss, cnt)
            mc.append(m)
            vc.append(v)
            lc.append(_ln(b, v))
        mu.append(mc)
        var.append(vc)
        logvar.append(lc)
    preds = []
    for r in x:
        scores = []
        for c in range(nclass):
            s = b.from_int(0)
            for j in range(nfeat):
                d = b.sub(r[j], mu[c][j])
                s = b.add(s, b.add(b.div(b.mul(d, d), var[c][j]), logvar[c][j]))
            scores.append(s)
        preds.append(_argmin(b, scores))
    return {"labels": preds}


# ---------------------------------------------------------------- CT

def _gini(b: ScalarBackend, counts: list[int], total: int):
    g = b.from_int(1)
    n = b.from_int(total)
    for c in counts:
        if c:
            p = b.div(b.from_int(c), n)
            g = b.sub(g, b.mul(p, p))
    return g


def _majority(counts: list[int]) -> int:
    return max(range(len(counts)), key=lambda c: (counts[c], -c))


def classification_tree(b: ScalarBackend, data: IrisData, max_depth: int = 5) -> dict:
    """CART with Gini impurity; thresholds at midpoints of adjacent distinct
    values.  A node splits only when the weighted impurity strictly drops."""
    x = _load(b, data)
    y = data.labels
    nclass = len(data.classes)
    half = b.const("0.5")

    def counts_of(idx):
        cnt = [0] * nclass
        for i in idx:
            cnt[y[i]] += 1
        return cnt

    def sort_by(idx, j):
        out: list[int] = []
        for i in idx:  # stable insertion sort with backend comparisons
            pos = len(out)
            while pos > 0 and b.compare(x[i][j], x[out[pos - 1]][j]) == -1:
                pos -= 1
            out.insert(pos, i)
        return out

    def build(idx, depth):
        cnt = counts_of(idx)
        node = {"leaf": _majority(cnt)}
        if depth >= max_depth or max(cnt) == len(idx):
            return node
        n = b.from_int(len(idx))
        best = _gini(b, cnt, len(idx))
        best_split = None
        for j in range(len(x[0])):
            order = sort_by(idx, j)
            left = [0] * nclass
            for pos in range(1, len(order)):
                left[y[order[pos - 1]]] += 1
                lo, hi = x[order[pos - 1]][j], x[order[pos]][j]
                if b.compare(lo, hi) != -1:
                    continue
                right = [t - l for t, l in zip(cnt, left)]
                wl = b.div(b.from_int(pos), n)
                wr = b.div(b.from_int(len(idx) - pos), n)
                score = b.add(b.mul(wl, _gini(b, left, pos)), b.mul(wr, _gini(b, right, len(idx) - pos)))
                if b.compare(score, best) == -1:
                    best = score
                    best_split = (j, b.mul(b.add(lo, hi), half))
        if best_split is None:
            return node
        j, thr = best_split
        li = [i for i in idx if b.compare(x[i][j], thr) != 1]
        ri = [i for i in idx if b.compare(x[i][j], thr) == 1]
        if not li or not ri:
            return node
        node.update(feature=j, threshold=thr, left=build(li, depth + 1), right=build(ri, depth + 1))
        return node

    tree = build(list(range(len(x))), 0)

    def predict(row):
        node = tree
        while "feature" in node:
            node = node["left"] if b.compare(row[node["feature"]], node["threshold"]) != 1 else node["right"]
        return node["leaf"]

    return {"labels": [predict(r) for r in x]}


LEVEL_TWO = {
    "MM": lambda b, d: matrix_multiply(b),
    "KM": k_means,
    "KNN": k_nearest,
    "LR": linear_regression,
    "NB": naive_bayes,
    "CT": classification_tree,
}


def run_level_two(name: str, backend: ScalarBackend, data: IrisData | None = None) -> BenchReport:
    data = data or load_iris()
    t0 = time.perf_counter()
    out = LEVEL_TWO[name](backend, data)
    elapsed = time.perf_counter() - t0
    summary = out.get("checksum") or out.get("determinant") or f"{len(next(iter(out.values())))} decisions"
    return BenchReport(
        benchmark=name,
        backend=backend.name,
        iterations=1,
        value=summary,
        wall_time=elapsed,
        outputs=out,
    )


def level_two_suite(backend: ScalarBackend, data: IrisData | None = None, kernels=None) -> dict[str, dict]:
    """Decision outputs of every (or the selected) Level Two kernel."""
    data = data or load_iris()
    return {k: LEVEL_TWO[k](backend, data) for k in (kernels or LEVEL_TWO)}


def _sig(text: str, digits: int) -> float:
    return float(f"{float(text):.{digits}g}")


def decisions_equal(name: str, got: dict, want: dict, coef_digits: int = 4) -> bool:
    """Decision equality; LR coefficients compare at ``coef_digits``
    significant digits."""
    if name == "LR":
        return all(
            _sig(g, coef_digits) == _sig(w, coef_digits)
            for g, w in zip(got["coefficients"], want["coefficients"])
        )
    if name == "KM":
        return got["assignments"] == want["assignments"]
    if name == "MM":
        return got["checksum"] == want["checksum"]
    return got["labels"] == want["labels"]
