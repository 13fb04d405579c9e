"""Exact topology lab: finite spaces, symbolic Alexandrov skeletons, cover
properties, filter convergence and an exhaustive claim-verification harness."""

from topolab.core import (
    ClassFlags,
    FiniteSpace,
    MapFlags,
    SpaceMap,
    TopologyError,
    build_space,
    map_classify,
    parse_topo,
    product,
)
from topolab.skeleton import SkeletonSpace, SymbolicSet, catalog, parse_skel

__all__ = [
    "ClassFlags",
    "FiniteSpace",
    "MapFlags",
    "SpaceMap",
    "SkeletonSpace",
    "SymbolicSet",
    "TopologyError",
    "build_space",
    "catalog",
    "map_classify",
    "parse_skel",
    "parse_topo",
    "product",
]
