"""Text descriptors for the constructors, e.g. ``loose-cycle:3:3`` or ``rs:9``.

    complete:n:r        K_n^r
    edge:r              K_r^r
    empty:n:r           no edges
    loose-cycle:l:r     C_l^r
    cycle:l, path:l     graph cycle / path with l edges
    triangle            cycle:3
    simplex:k           K_{k+1}^k
    fano                Fano plane
    expansion:r:BASE    E^r(BASE) for any descriptor BASE
    tensor:N:BASE       BASE^{(x)N}
    rs:m[:mode]         Ruzsa-Szemeredi system over behrend_set(m, mode)
    random:n:p:r:seed   G_{n,p}^r
    greedy:n:r:k:seed   greedy partial Steiner system

Anything else is read as a path to a hypergraph file.
"""

from __future__ import annotations

import os

from . import constructions as cons
from .hypergraph import Hypergraph, HypergraphError, parse_hypergraph
from .witnesses import behrend_set, greedy_partial_steiner, rs_triangle_system


def _ints(parts, k, desc):
    if len(parts) != k:
        raise HypergraphError(f"descriptor {desc!r} expects {k} fields")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise HypergraphError(f"descriptor {desc!r} has a non-integer field") from None


def parse_family(desc: str) -> Hypergraph:
    head, _, rest = desc.partition(":")
    parts = rest.split(":") if rest else []
    if head == "complete":
        n, r = _ints(parts, 2, desc)
        return cons.complete(n, r)
    if head == "edge":
        (r,) = _ints(parts, 1, desc)
        return cons.single_edge(r)
    if head == "empty":
        n, r = _ints(parts, 2, desc)
        return cons.empty(n, r)
    if head == "loose-cycle":
        length, r = _ints(parts, 2, desc)
        return cons.loose_cycle(length, r)
    if head == "cycle":
        (length,) = _ints(parts, 1, desc)
        return cons.graph_cycle(length)
    if head == "path":
        (length,) = _ints(parts, 1, desc)
        return cons.graph_path(length)
    if head == "triangle" and not parts:
        return cons.graph_cycle(3).named("triangle")
    if head == "simplex":
        (k,) = _ints(parts, 1, desc)
        return cons.simplex(k)
    if head == "fano" and not parts:
        return cons.fano_plane()
    if head in ("expansion", "tensor"):
        num, _, base = rest.partition(":")
        if not base:
            raise HypergraphError(f"descriptor {desc!r} needs a base descriptor")
        (k,) = _ints([num], 1, desc)
        B = parse_family(base)
        if head == "expansion":
            return cons.expansion(B, k).named(desc)
        return cons.tensor_power(B, k).named(desc)
    if head == "rs":
        if len(parts) not in (1, 2):
            raise HypergraphError(f"descriptor {desc!r} expects rs:m or rs:m:mode")
        (m,) = _ints(parts[:1], 1, desc)
        mode = parts[1] if len(parts) == 2 else "auto"
        return rs_triangle_system(m, behrend_set(m, mode)).named(desc)
    if head == "random":
        if len(parts) != 4:
            raise HypergraphError(f"descriptor {desc!r} expects random:n:p:r:seed")
        n, r, seed = _ints([parts[0], parts[2], parts[3]], 3, desc)
        return cons.random_hypergraph(n, float(parts[1]), r, seed)
    if head == "greedy":
        n, r, k, seed = _ints(parts, 4, desc)
        return greedy_partial_steiner(n, r, k, seed)
    if os.path.exists(desc):
        with open(desc, encoding="utf-8") as fh:
            return parse_hypergraph(fh.read(), name=os.path.basename(desc))
    raise HypergraphError(f"unknown family descriptor or missing file {desc!r}")
