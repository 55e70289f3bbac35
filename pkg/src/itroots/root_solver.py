"""Complete search for iterative roots of finite endofunctions.

Given f on n points and an order k >= 2, ``find_root`` decides whether some g
with g^k = f exists, by depth-first assignment of g point by point.  Two
sound prunings keep the n^n blowup at desk scale:

* commutation: any root satisfies g(f(x)) = f(g(x)), so assigning g(x) = v
  forces g(f(x)) = f(v);
* chain closure: once the k-step g-chain from x is fully assigned it must
  land on f(x); if all but the last link are assigned, that link is forced.

Both prunings only ever remove non-roots (tested against the naive
enumerator), so the search stays complete.  Sequential search assigns the
lowest unassigned point first and tries values in ascending order, which
makes the first witness the lexicographically smallest root table.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from typing import Literal, Optional

from .endo import Endofunction, iterate

DEFAULT_NODE_BUDGET = 10**8

Mode = Literal["first-witness", "count-all"]


class BudgetExceeded(Exception):
    """Search aborted: the node budget ran out before the space was exhausted.

    Deliberately distinct from a "none" result; a caller must not treat this
    as evidence that no root exists.
    """

    def __init__(self, explored: int):
        super().__init__(f"node budget exceeded after {explored} expansions")
        self.explored = explored


@dataclass(frozen=True)
class RootQuery:
    f: Endofunction
    order: int
    mode: Mode = "first-witness"
    budget: int = DEFAULT_NODE_BUDGET

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("root order must be >= 2")
        if self.mode not in ("first-witness", "count-all"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.budget <= 0:
            raise ValueError("budget must be positive")


@dataclass(frozen=True)
class RootResult:
    status: Literal["found", "none"]
    witness: Optional[Endofunction]
    explored: int
    count: Optional[int] = None  # set by count-all mode only


def verify_root(f: Endofunction, g: Endofunction, n: int) -> bool:
    """True iff g^n = f pointwise."""
    if f.size != g.size:
        raise ValueError("verify_root: size mismatch")
    if n < 0:
        raise ValueError("verify_root: order must be nonnegative")
    return iterate(g, n).table == f.table


class _Search:
    """One DFS run over partial tables of g.  Recursion depth <= n."""

    def __init__(self, f: Endofunction, order: int, budget: int,
                 count_all: bool = False):
        self.f = f.table
        self.n = f.size
        self.order = order
        self.budget = budget
        self.count_all = count_all
        self.g = [-1] * self.n
        self.explored = 0
        self.witness: Optional[tuple[int, ...]] = None
        self.count = 0

    def _assign(self, x: int, v: int, trail: list[int]) -> bool:
        """Set g(x) = v and propagate to a fixpoint.  False on contradiction.

        Propagation interleaves commutation pairs with chain-closure passes
        until neither forces anything new.  Every write lands on ``trail``
        so the caller can undo it.
        """
        g, f, order = self.g, self.f, self.order
        pend = [(x, v)]
        while True:
            while pend:
                a, b = pend.pop()
                cur = g[a]
                if cur != -1:
                    if cur != b:
                        return False
                    continue
                g[a] = b
                trail.append(a)
                pend.append((f[a], f[b]))
            progressed = False
            for x0 in range(self.n):
                y = x0
                steps = 0
                while steps < order and g[y] != -1:
                    y = g[y]
                    steps += 1
                if steps == order:
                    if y != f[x0]:
                        return False
                elif steps == order - 1:
                    cur = g[y]
                    if cur == -1:
                        pend.append((y, f[x0]))
                        progressed = True
                    elif cur != f[x0]:
                        return False
            if not progressed and not pend:
                return True

    def _dfs(self) -> bool:
        """Explore below the current partial table.  True = stop the search."""
        x = -1
        for i in range(self.n):
            if self.g[i] == -1:
                x = i
                break
        if x == -1:
            self.count += 1
            if self.witness is None:
                self.witness = tuple(self.g)
            return not self.count_all
        for v in range(self.n):
            self.explored += 1
            if self.explored > self.budget:
                raise BudgetExceeded(self.explored)
            trail: list[int] = []
            ok = self._assign(x, v, trail)
            if ok and self._dfs():
                return True
            for a in trail:
                self.g[a] = -1
        return False

    def run(self, pinned: Optional[tuple[int, int]] = None) -> None:
        if pinned is None:
            self._dfs()
            return
        trail: list[int] = []
        self.explored += 1
        if self._assign(pinned[0], pinned[1], trail):
            self._dfs()
        for a in trail:
            self.g[a] = -1


def _run_query(f: Endofunction, order: int, budget: int, count_all: bool,
               pinned: Optional[tuple[int, int]] = None) -> RootResult:
    search = _Search(f, order, budget, count_all)
    search.run(pinned)
    if search.witness is not None:
        return RootResult("found", Endofunction(search.witness),
                          search.explored,
                          search.count if count_all else None)
    return RootResult("none", None, search.explored,
                      search.count if count_all else None)


def _parallel_cell(args) -> tuple[str, Optional[tuple[int, ...]], int]:
    table, order, budget, v = args
    f = Endofunction(table)
    try:
        res = _run_query(f, order, budget, False, pinned=(0, v))
    except BudgetExceeded as exc:
        return ("budget", None, exc.explored)
    wit = res.witness.table if res.witness is not None else None
    return (res.status, wit, res.explored)


def find_root(query: RootQuery, parallel: bool = False) -> RootResult:
    """Decide g^order = query.f by complete search.

    Sequential mode is deterministic and returns the lexicographically
    smallest witness.  Parallel mode splits the top-level branching across
    processes; it preserves the found/none answer but not witness identity.
    count-all mode enumerates every root (exponential; small inputs only).

    Raises BudgetExceeded when the node budget runs out; that outcome is
    disjoint from a "none" answer.
    """
    if not parallel or query.mode == "count-all" or query.f.size == 1:
        return _run_query(query.f, query.order, query.budget,
                          query.mode == "count-all")
    jobs = [(query.f.table, query.order, query.budget, v)
            for v in range(query.f.size)]
    explored = 0
    witness = None
    saw_budget = False
    with concurrent.futures.ProcessPoolExecutor() as pool:
        for status, wit, nodes in pool.map(_parallel_cell, jobs):
            explored += nodes
            if status == "found" and witness is None:
                witness = wit
            elif status == "budget":
                saw_budget = True
    if witness is not None:
        return RootResult("found", Endofunction(witness), explored)
    if saw_budget:
        raise BudgetExceeded(explored)
    return RootResult("none", None, explored)


@dataclass(frozen=True)
class OrderReport:
    order: int
    status: Literal["found", "none", "budget-exceeded"]
    witness: Optional[Endofunction]
    explored: int


def has_root_up_to(f: Endofunction, n_max: int,
                   budget: int = DEFAULT_NODE_BUDGET) -> list[OrderReport]:
    """find_root status for every order 2..n_max (nothing short-circuits)."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    reports = []
    for order in range(2, n_max + 1):
        try:
            res = find_root(RootQuery(f, order, budget=budget))
            reports.append(OrderReport(order, res.status, res.witness,
                                       res.explored))
        except BudgetExceeded as exc:
            reports.append(OrderReport(order, "budget-exceeded", None,
                                       exc.explored))
    return reports


def naive_root_search(f: Endofunction, order: int) -> Optional[Endofunction]:
    """Brute-force reference: try all n^n tables.  Test oracle only."""
    n = f.size
    g = [0] * n
    while True:
        cand = Endofunction(tuple(g))
        if iterate(cand, order).table == f.table:
            return cand
        i = n - 1
        while i >= 0 and g[i] == n - 1:
            g[i] = 0
            i -= 1
        if i < 0:
            return None
        g[i] += 1
