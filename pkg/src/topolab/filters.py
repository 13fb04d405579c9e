"""Filter bases on finite spaces: pre-theta convergence and accumulation,
and the per-clause forms of the filter characterizations of p-closedness
(absolute and relative to a subset).

Every filter base on a finite carrier has a smallest member (the base
axiom forces one below any two members), so bases are canonicalized by
that minimum; convergence and accumulation depend only on it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from topolab.core import FiniteSpace, TopologyError, bits
from topolab.properties import check_cover, check_cover_relative


@dataclass(frozen=True)
class FilterBase:
    """A nonempty family of nonempty subsets, downward directed."""

    space: FiniteSpace
    members: tuple[int, ...]

    def __post_init__(self):
        if not self.members:
            raise TopologyError("filter base needs at least one member")
        for m in self.members:
            self.space.check_fits(m)
            if m == 0:
                raise TopologyError("filter base cannot contain the empty set")
        for f1 in self.members:
            for f2 in self.members:
                if not any(f3 & ~(f1 & f2) == 0 for f3 in self.members):
                    raise TopologyError(
                        "filter base axiom fails: no member below "
                        f"{set(bits(f1))} and {set(bits(f2))}"
                    )
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    def minimum(self) -> int:
        m = self.members[0]
        for f in self.members:
            if f & ~m == 0:
                m = f
        for f in self.members:
            if m & ~f:
                raise AssertionError("base axiom guarantees a minimum member")
        return m

    def meets(self, s: int) -> bool:
        return all(f & s for f in self.members)


def pre_theta_converges(fb: FilterBase, x: int) -> bool:
    """Every preopen neighbourhood's preclosure traps some member."""
    sp = fb.space
    for v in sp.preopen_at(x):
        pcl_v = sp.preclosure(v)
        if not any(f & ~pcl_v == 0 for f in fb.members):
            return False
    return True


def pre_theta_accumulates(fb: FilterBase, x: int) -> bool:
    """Every preopen neighbourhood's preclosure meets every member."""
    sp = fb.space
    for v in sp.preopen_at(x):
        pcl_v = sp.preclosure(v)
        if any(not (pcl_v & f) for f in fb.members):
            return False
    return True


def maximal_filter_bases(space: FiniteSpace) -> tuple[FilterBase, ...]:
    """Representatives of the maximal filter bases: the point bases."""
    return tuple(FilterBase(space, (1 << x,)) for x in range(space.n))


def principal_filter_bases(space: FiniteSpace) -> tuple[FilterBase, ...]:
    """One representative per filter on the carrier (all are principal)."""
    return tuple(
        FilterBase(space, (m,)) for m in range(1, space.full + 1)
    )


def antichain_filter_bases(space: FiniteSpace, rng: random.Random | None = None,
                           samples: int = 0):
    """Filter bases generated by antichains of nonempty subsets, closed
    under pairwise intersection; exhaustive when no rng is given."""
    full = space.full
    nonempty = [m for m in range(1, full + 1)]

    def close(family):
        fam = set(family)
        while True:
            new = {a & b for a in fam for b in fam} - fam
            if 0 in new or not new:
                return None if 0 in new else fam
            fam |= new

    if rng is None:
        for r in range(1, len(nonempty) + 1):
            for combo in combinations(nonempty, r):
                if any(
                    a != b and a & ~b == 0 for a in combo for b in combo
                ):
                    continue  # not an antichain
                fam = close(combo)
                if fam is not None:
                    yield FilterBase(space, tuple(fam))
        return
    for _ in range(samples):
        k = rng.randint(1, 3)
        combo = tuple(rng.sample(nonempty, k))
        if any(a != b and a & ~b == 0 for a in combo for b in combo):
            continue
        fam = close(combo)
        if fam is not None:
            yield FilterBase(space, tuple(fam))


def is_strictly_finer(fine: FilterBase, coarse: FilterBase) -> bool:
    """Filter refinement up to equivalence on the finite carrier."""
    mf, mc = fine.minimum(), coarse.minimum()
    return mf & ~mc == 0 and mf != mc


# -- clause evaluation for the absolute characterization -----------------------


def _preclosed_sets(space: FiniteSpace) -> tuple[int, ...]:
    return tuple(
        m for m in range(space.full + 1)
        if space.closure(space.interior(m)) & ~m == 0
    )


def _families_ok(space: FiniteSpace, sets: tuple[int, ...], target: int) -> bool:
    """Over every subfamily whose intersection misses ``target``: some
    (finite) subfamily's preinterior intersection misses it too.  DFS with
    pruning: once the preinterior intersection is inside the complement,
    every extension stays admissible."""
    pints = {m: space.preinterior(m) for m in sets}
    full = space.full

    def dfs(idx, inter, pinter):
        if pinter & target == 0:
            return True  # subfamily already witnesses the conclusion
        if idx == len(sets):
            return bool(inter & target)  # vacuous unless intersection misses
        m = sets[idx]
        if not dfs(idx + 1, inter, pinter):
            return False
        return dfs(idx + 1, inter & m, pinter & pints[m])

    return dfs(0, full, full)


def check_t41(space: FiniteSpace, rng: random.Random | None = None,
              samples: int = 2000) -> tuple[bool, bool, bool, bool]:
    """The four equivalent faces of p-closedness, each computed honestly."""
    a = check_cover(space, "p-closed").outcome is True
    b = all(
        any(pre_theta_converges(fb, x) for x in range(space.n))
        for fb in maximal_filter_bases(space)
    )
    bases = list(principal_filter_bases(space))
    if space.n <= 3:
        bases.extend(antichain_filter_bases(space))
    elif rng is not None:
        bases.extend(antichain_filter_bases(space, rng, samples))
    # accumulation depends only on the minimum member; memoize on it
    memo = {}
    c = True
    for fb in bases:
        m = fb.minimum()
        if m not in memo:
            memo[m] = any(
                pre_theta_accumulates(fb, x) for x in range(space.n)
            )
        if not memo[m]:
            c = False
            break
    d = _families_ok(space, _preclosed_sets(space), space.full)
    return a, b, c, d


def check_t43(space: FiniteSpace, s: int, rng: random.Random | None = None,
              samples: int = 2000) -> tuple[bool, bool, bool, bool]:
    """Relative analogs of the four clauses for a distinguished subset."""
    space.check_fits(s)
    a = check_cover_relative(space, s, "p-closed").outcome is True
    b = all(
        any(pre_theta_converges(fb, x) for x in bits(s))
        for fb in maximal_filter_bases(space)
        if fb.meets(s)
    )
    bases = [fb for fb in principal_filter_bases(space) if fb.meets(s)]
    if space.n <= 3:
        bases.extend(fb for fb in antichain_filter_bases(space) if fb.meets(s))
    elif rng is not None:
        bases.extend(
            fb for fb in antichain_filter_bases(space, rng, samples) if fb.meets(s)
        )
    memo = {}
    c = True
    for fb in bases:
        m = fb.minimum()
        if m not in memo:
            memo[m] = any(pre_theta_accumulates(fb, x) for x in bits(s))
        if not memo[m]:
            c = False
            break
    d = _families_ok(space, _preclosed_sets(space), s)
    return a, b, c, d
