import itertools

import pytest
from hypothesis import strategies as st

from treefair.matrix import TransitionMatrix

ACCEPTANCE_LINES = []


@st.composite
def matrices(draw, min_d=1, max_d=4, nonempty=True):
    d = draw(st.integers(min_d, max_d))
    low = 1 if nonempty else 0
    rows = [
        draw(st.sets(st.integers(1, d), min_size=low, max_size=d))
        for _ in range(d)
    ]
    return TransitionMatrix.from_rows(rows)


def brute_force_rows(A, k, n, root):
    """F_n(root) by trying every assignment of symbols to every site of the tree.

    Sites are numbered breadth first, so the children of site x are
    x*k + 1 .. x*k + k and row n is the last k**n sites.
    """
    sites = sum(k**m for m in range(n + 1))
    first_leaf = sites - k**n
    out = set()
    for labels in itertools.product(range(1, A.d + 1), repeat=sites - 1):
        lab = (root,) + labels
        ok = all(
            lab[x * k + g] in A.rows[lab[x] - 1]
            for x in range(first_leaf)
            for g in range(1, k + 1)
        )
        if ok:
            out.add("".join(str(c) for c in lab[first_leaf:]))
    return out


def reach_sets(A, n):
    """Symbols reachable from each i in exactly n steps, by set iteration."""
    out = []
    for i in A.symbols:
        cur = {i}
        for _ in range(n):
            cur = set().union(*(A.rows[s - 1] for s in cur)) if cur else set()
        out.append(cur)
    return out


@pytest.fixture
def acceptance_report():
    def record(number, title, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}  {detail}".rstrip())
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
