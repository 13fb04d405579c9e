"""Finite topological spaces with exact set operators.

Points are labeled 0..n-1 and subsets are integer bitmasks.  The family of
open sets is stored explicitly in canonical order (cardinality, then mask
value), so equality of spaces is structural and spaces hash cheaply during
enumeration.  All values are immutable and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property


class TopologyError(ValueError):
    """Malformed space, subset, map or space file."""


def bits(mask: int):
    """Iterate the set bits of a mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(points, n: int) -> int:
    m = 0
    for p in points:
        if not 0 <= p < n:
            raise TopologyError(f"point {p} outside carrier 0..{n - 1}")
        m |= 1 << p
    return m


def points_of(mask: int) -> tuple[int, ...]:
    return tuple(bits(mask))


def _canon(opens) -> tuple[int, ...]:
    return tuple(sorted(set(opens), key=lambda m: (bin(m).count("1"), m)))


CLASS_FLAG_NAMES = (
    "open",
    "closed",
    "regular_open",
    "regular_closed",
    "preopen",
    "preclosed",
    "semi_open",
    "semi_closed",
    "semi_regular",
    "alpha_open",
    "delta_preopen",
    "delta_preclosed",
    "preregular",
    "pre_theta_open",
    "pre_theta_closed",
    "dense",
    "nowhere_dense",
    "locally_closed",
    "locally_dense",
)


@dataclass(frozen=True)
class ClassFlags:
    """Classification of one subset against the full zoo of set classes."""

    open: bool
    closed: bool
    regular_open: bool
    regular_closed: bool
    preopen: bool
    preclosed: bool
    semi_open: bool
    semi_closed: bool
    semi_regular: bool
    alpha_open: bool
    delta_preopen: bool
    delta_preclosed: bool
    preregular: bool
    pre_theta_open: bool
    pre_theta_closed: bool
    dense: bool
    nowhere_dense: bool
    locally_closed: bool
    locally_dense: bool

    def as_dict(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in CLASS_FLAG_NAMES}


@dataclass(frozen=True)
class FiniteSpace:
    """An explicit topology on the carrier {0, .., n-1}.

    ``opens`` is canonically ordered, deduplicated, contains the empty set
    and the full carrier, and is closed under pairwise union and
    intersection (checked on construction).
    """

    n: int
    opens: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise TopologyError("carrier must have at least one point")
        full = (1 << self.n) - 1
        seen = set(self.opens)
        if len(seen) != len(self.opens):
            raise TopologyError("duplicate open sets")
        if 0 not in seen or full not in seen:
            raise TopologyError("opens must contain the empty set and the carrier")
        for m in self.opens:
            if m & ~full:
                raise TopologyError(f"open set {m:b} exceeds the carrier")
        for a in self.opens:
            for b in self.opens:
                if a | b not in seen:
                    raise TopologyError(
                        f"not closed under union: {points_of(a)} | {points_of(b)}"
                    )
                if a & b not in seen:
                    raise TopologyError(
                        f"not closed under intersection: {points_of(a)} & {points_of(b)}"
                    )
        object.__setattr__(self, "opens", _canon(self.opens))

    # -- basic structure ------------------------------------------------

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def _open_set(self) -> frozenset:
        return frozenset(self.opens)

    @cached_property
    def min_nbhd(self) -> tuple[int, ...]:
        """Smallest open neighbourhood of each point (finite = Alexandrov)."""
        out = []
        for x in range(self.n):
            m = self.full
            for o in self.opens:
                if o >> x & 1:
                    m &= o
            out.append(m)
        return tuple(out)

    def is_open(self, a: int) -> bool:
        return a in self._open_set

    def is_closed(self, a: int) -> bool:
        return (self.full ^ a) in self._open_set

    def check_fits(self, a: int):
        if a & ~self.full:
            raise TopologyError(f"subset {a:b} does not fit carrier of size {self.n}")

    # -- primitive operators --------------------------------------------

    def interior(self, a: int) -> int:
        self.check_fits(a)
        m = 0
        for o in self.opens:
            if o & ~a == 0:
                m |= o
        return m

    def closure(self, a: int) -> int:
        self.check_fits(a)
        return self.full ^ self.interior(self.full ^ a)

    def consolidation(self, a: int) -> int:
        """int(cl(a)): the largest open set a dense-ish set fills."""
        return self.interior(self.closure(a))

    def preclosure(self, a: int) -> int:
        return a | self.closure(self.interior(a))

    def preinterior(self, a: int) -> int:
        self.check_fits(a)
        return self.full ^ self.preclosure(self.full ^ a)

    def semi_closure(self, a: int) -> int:
        return a | self.interior(self.closure(a))

    # -- delta operators -------------------------------------------------

    @cached_property
    def regular_opens(self) -> tuple[int, ...]:
        return _canon(self.interior(self.closure(o)) for o in self.opens)

    @cached_property
    def _min_regular_nbhd(self) -> tuple[int, ...]:
        out = []
        for x in range(self.n):
            m = self.full
            for r in self.regular_opens:
                if r >> x & 1:
                    m &= r
            out.append(m)
        return tuple(out)

    def delta_closure(self, a: int) -> int:
        self.check_fits(a)
        m = 0
        for x in range(self.n):
            if self._min_regular_nbhd[x] & a:
                m |= 1 << x
        return m

    def is_delta_preopen(self, a: int) -> bool:
        return a & ~self.interior(self.delta_closure(a)) == 0

    def delta_preclosure(self, a: int) -> int:
        """Intersection of all delta-preclosed supersets of ``a``."""
        self.check_fits(a)
        out = self.full
        rest = self.full ^ a
        sub = rest
        while True:
            m = a | sub
            if self.is_delta_preopen(self.full ^ m):
                out &= m
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return out

    # -- preopen families and pre-theta operators -------------------------

    @cached_property
    def preopen_masks(self) -> tuple[int, ...]:
        return _canon(
            a for a in range(self.full + 1) if a & ~self.consolidation(a) == 0
        )

    def preopen_family(self) -> tuple[int, ...]:
        return self.preopen_masks

    def preopen_at(self, x: int) -> tuple[int, ...]:
        if not 0 <= x < self.n:
            raise TopologyError(f"point {x} outside carrier")
        return tuple(a for a in self.preopen_masks if a >> x & 1)

    @cached_property
    def semiopen_masks(self) -> tuple[int, ...]:
        return _canon(
            a
            for a in range(self.full + 1)
            if a & ~self.closure(self.interior(a)) == 0
        )

    @cached_property
    def _preopen_pcl(self) -> tuple[tuple[int, int], ...]:
        return tuple((v, self.preclosure(v)) for v in self.preopen_masks)

    def pre_theta_closure(self, a: int) -> int:
        self.check_fits(a)
        m = 0
        for x in range(self.n):
            xbit = 1 << x
            for v, pcl_v in self._preopen_pcl:
                if v & xbit and not pcl_v & a:
                    break
            else:
                m |= xbit
        return m

    # -- classification ----------------------------------------------------

    @cached_property
    def _classify_cache(self) -> dict:
        return {}

    def classify(self, a: int) -> ClassFlags:
        cached = self._classify_cache.get(a)
        if cached is not None:
            return cached
        flags = self._classify(a)
        self._classify_cache[a] = flags
        return flags

    def _classify(self, a: int) -> ClassFlags:
        self.check_fits(a)
        cl_a = self.closure(a)
        int_a = self.interior(a)
        int_cl = self.interior(cl_a)
        cl_int = self.closure(int_a)
        preopen = a & ~int_cl == 0
        preclosed = cl_int & ~a == 0
        semi_open = a & ~cl_int == 0
        semi_closed = int_cl & ~a == 0
        pth = self.pre_theta_closure(a)
        pth_c = self.pre_theta_closure(self.full ^ a)
        return ClassFlags(
            open=self.is_open(a),
            closed=self.is_closed(a),
            regular_open=a == int_cl,
            regular_closed=a == cl_int,
            preopen=preopen,
            preclosed=preclosed,
            semi_open=semi_open,
            semi_closed=semi_closed,
            semi_regular=semi_open and semi_closed,
            alpha_open=a & ~self.interior(self.closure(int_a)) == 0,
            delta_preopen=self.is_delta_preopen(a),
            delta_preclosed=self.is_delta_preopen(self.full ^ a),
            preregular=preopen and preclosed,
            pre_theta_open=pth_c == self.full ^ a,
            pre_theta_closed=pth == a,
            dense=cl_a == self.full,
            nowhere_dense=int_cl == 0,
            locally_closed=any(a == o & cl_a for o in self.opens),
            locally_dense=preopen,
        )

    # -- derived spaces ------------------------------------------------------

    def subspace(self, a: int) -> tuple["FiniteSpace", tuple[int, ...]]:
        """Relative topology on ``a``, plus the old labels of the new points."""
        self.check_fits(a)
        if a == 0:
            raise TopologyError("empty subspace rejected")
        pts = points_of(a)
        index = {p: i for i, p, in enumerate(pts)}
        traced = set()
        for o in self.opens:
            m = 0
            for p in bits(o & a):
                m |= 1 << index[p]
            traced.add(m)
        return FiniteSpace(len(pts), _canon(traced)), pts

    def __str__(self):
        sets = ",".join("{" + " ".join(map(str, points_of(o))) + "}" for o in self.opens)
        return f"FiniteSpace(n={self.n}, opens=[{sets}])"


def build_space(n: int, generators) -> FiniteSpace:
    """Smallest topology on ``n`` points containing every generator."""
    if n < 1:
        raise TopologyError("carrier must have at least one point")
    full = (1 << n) - 1
    fam = {0, full}
    for g in generators:
        if g & ~full:
            raise TopologyError(f"generator {g:b} does not fit carrier of size {n}")
        fam.add(g)
    while True:
        new = set()
        items = tuple(fam)
        for i, x in enumerate(items):
            for y in items[i + 1 :]:
                u, v = x | y, x & y
                if u not in fam:
                    new.add(u)
                if v not in fam:
                    new.add(v)
        if not new:
            break
        fam |= new
    return FiniteSpace(n, _canon(fam))


def product(x: FiniteSpace, y: FiniteSpace) -> FiniteSpace:
    """Product topology with row-major point order: (p, q) -> p*|Y| + q."""
    gens = []
    for u in x.opens:
        for v in y.opens:
            m = 0
            for p in bits(u):
                for q in bits(v):
                    m |= 1 << (p * y.n + q)
            gens.append(m)
    return build_space(x.n * y.n, gens)


@dataclass(frozen=True)
class MapFlags:
    continuous: bool
    precontinuous: bool
    preirresolute: bool


@dataclass(frozen=True)
class SpaceMap:
    """A point map between two finite spaces."""

    domain: FiniteSpace
    codomain: FiniteSpace
    assignment: tuple[int, ...]

    def __post_init__(self):
        if len(self.assignment) != self.domain.n:
            raise TopologyError("assignment length must equal the domain carrier")
        for q in self.assignment:
            if not 0 <= q < self.codomain.n:
                raise TopologyError(f"image point {q} outside codomain")

    def image(self, a: int) -> int:
        m = 0
        for p in bits(a):
            m |= 1 << self.assignment[p]
        return m

    def preimage(self, b: int) -> int:
        m = 0
        for p, q in enumerate(self.assignment):
            if b >> q & 1:
                m |= 1 << p
        return m

    def is_surjective(self) -> bool:
        return self.image(self.domain.full) == self.codomain.full


def map_classify(f: SpaceMap) -> MapFlags:
    x, y = f.domain, f.codomain
    continuous = all(x.is_open(f.preimage(v)) for v in y.opens)
    po_x = frozenset(x.preopen_masks)
    precontinuous = all(f.preimage(v) in po_x for v in y.opens)
    preirresolute = all(f.preimage(v) in po_x for v in y.preopen_masks)
    return MapFlags(continuous, precontinuous, preirresolute)


def semi_regular_sandwich(space: FiniteSpace, a: int) -> bool:
    """Regular-open sandwich test: some regular open U has U <= a <= cl(U)."""
    for u in space.regular_opens:
        if u & ~a == 0 and a & ~space.closure(u) == 0:
            return True
    return False


# -- the .topo text format ---------------------------------------------------


def parse_topo(text: str) -> FiniteSpace:
    """Parse the ``.topo`` format: ``points N`` then one ``open ...`` per line.

    The empty set and the full carrier may be omitted.  The listed family
    must already be a topology; violations are diagnosed with the offending
    pair of sets.
    """
    n = None
    fam = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "points":
            if n is not None:
                raise TopologyError(f"line {lineno}: duplicate points declaration")
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise TopologyError(f"line {lineno}: expected 'points N' with N >= 1")
            n = int(parts[1])
        elif parts[0] == "open":
            if n is None:
                raise TopologyError(f"line {lineno}: 'open' before 'points'")
            try:
                pts = [int(t) for t in parts[1:]]
            except ValueError:
                raise TopologyError(f"line {lineno}: non-integer point label") from None
            fam.add(mask_of(pts, n))
        else:
            raise TopologyError(f"line {lineno}: unknown directive {parts[0]!r}")
    if n is None:
        raise TopologyError("missing 'points N' line")
    full = (1 << n) - 1
    fam |= {0, full}
    for a in fam:
        for b in fam:
            for m, op in ((a | b, "union"), (a & b, "intersection")):
                if m not in fam:
                    raise TopologyError(
                        f"not a topology: {op} of {set(points_of(a))} and "
                        f"{set(points_of(b))} is missing"
                    )
    return FiniteSpace(n, _canon(fam))


def format_topo(space: FiniteSpace) -> str:
    lines = [f"points {space.n}"]
    for o in space.opens:
        if o in (0, space.full):
            continue
        lines.append("open " + " ".join(str(p) for p in points_of(o)))
    return "\n".join(lines) + "\n"


# -- named tiny spaces used throughout the tests -----------------------------


def sierpinski() -> FiniteSpace:
    return build_space(2, [0b10])


def indiscrete(n: int) -> FiniteSpace:
    return build_space(n, [])


def discrete(n: int) -> FiniteSpace:
    return build_space(n, [1 << i for i in range(n)])


def excluded_point(n: int, p: int = 0) -> FiniteSpace:
    """All sets avoiding ``p`` are open; only the whole space contains it."""
    gens = [1 << i for i in range(n) if i != p]
    return build_space(n, gens)
