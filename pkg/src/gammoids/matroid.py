"""Set systems on small ground sets: gammoids, circuits, axioms, finitarization.

Subsets of the ground set are bitmasks in ground order, and every
exhaustive operation works on the membership table of all 2^n masks.
The domination diagnostics at the end look at a countable presentation
through growing truncations and only ever report evidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from gammoids.bruteforce import brute_force_linkable
from gammoids.errors import BudgetExceeded
from gammoids.families import GraphPresentation, with_single_sink
from gammoids.graph import Digraph, Edge, LinkageProblem
from gammoids.menger import is_linkable, linkage_value

MAX_GROUND = 20
AXIOMS = ("I1", "I2", "I3", "IM", "+", "*")


@dataclass(frozen=True)
class SetSystem:
    ground: tuple[str, ...]
    member: Callable[[frozenset[str]], bool] = field(repr=False, compare=False)
    provenance: str = "explicit"

    def __contains__(self, S: Iterable[str]) -> bool:
        return self.member(frozenset(S))

    @property
    def n(self) -> int:
        return len(self.ground)

    @cached_property
    def table(self) -> list[bool]:
        """Membership of every subset, indexed by bitmask."""
        if self.n > MAX_GROUND:
            raise BudgetExceeded(f"ground set of {self.n} elements exceeds {MAX_GROUND}")
        return [self.member(self.unmask(m)) for m in range(1 << self.n)]

    def mask(self, S: Iterable[str]) -> int:
        index = {x: i for i, x in enumerate(self.ground)}
        return sum(1 << index[x] for x in set(S))

    def unmask(self, m: int) -> frozenset[str]:
        return frozenset(x for i, x in enumerate(self.ground) if m >> i & 1)

    def sort(self, S: Iterable[str]) -> list[str]:
        index = {x: i for i, x in enumerate(self.ground)}
        return sorted(S, key=index.__getitem__)

    def independent_sets(self) -> list[frozenset[str]]:
        return [self.unmask(m) for m, ok in enumerate(self.table) if ok]

    def rank(self) -> int:
        return max((m.bit_count() for m, ok in enumerate(self.table) if ok), default=0)


def explicit_system(ground: Iterable[str], sets: Iterable[Iterable[str]]) -> SetSystem:
    listed = frozenset(frozenset(S) for S in sets)
    return SetSystem(tuple(ground), listed.__contains__, "explicit")


def independent(g: Digraph, B: Iterable[str], S: Iterable[str], mode: str = "directed-vertex") -> bool:
    """S can be linked to B by disjoint paths (vertex- or edge-disjoint per mode)."""
    return is_linkable(LinkageProblem(g, tuple(S), tuple(B), None, mode))


def gammoid(
    g: Digraph,
    B: Iterable[str],
    mode: str = "directed-vertex",
    oracle: str = "flow",
) -> SetSystem:
    B = tuple(B)
    if oracle == "flow":
        test = is_linkable
    elif oracle == "brute":
        test = brute_force_linkable
    else:
        raise ValueError(f"unknown oracle {oracle!r}; expected flow or brute")

    def member(S: frozenset[str]) -> bool:
        return test(LinkageProblem(g, tuple(g.sort_vertices(S)), B, None, mode))

    return SetSystem(g.vertices, member, f"gammoid(B={list(B)}, mode={mode}, oracle={oracle})")


# -- circuits ---------------------------------------------------------------


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low)
        m ^= low
    return out


def _circuit_masks(table: list[bool]) -> list[bool]:
    """Masks outside the system all of whose proper subsets are inside."""
    N = len(table)
    proper_in = [True] * N
    circuit = [False] * N
    for m in range(N):
        ok = True
        for bit in _bits(m):
            if not (table[m ^ bit] and proper_in[m ^ bit]):
                ok = False
                break
        proper_in[m] = ok
        circuit[m] = ok and not table[m]
    return circuit


def circuits(system: SetSystem, max_size: int | None = None) -> list[frozenset[str]]:
    """Minimal non-members of size at most `max_size`, smallest first."""
    flags = _circuit_masks(system.table)
    found = [m for m, c in enumerate(flags) if c and (max_size is None or m.bit_count() <= max_size)]
    found.sort(key=lambda m: (m.bit_count(), [i for i in range(system.n) if m >> i & 1]))
    return [system.unmask(m) for m in found]


# -- axioms -----------------------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    verdicts: dict[str, bool]
    counterexamples: dict[str, tuple]
    system: SetSystem = field(repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def failed(self) -> list[str]:
        return [a for a in AXIOMS if not self.verdicts[a]]

    def to_json(self) -> dict:
        sort = self.system.sort
        return {
            "verdicts": dict(self.verdicts),
            "counterexamples": {
                a: [sort(x) if isinstance(x, frozenset) else x for x in ce]
                for a, ce in self.counterexamples.items()
            },
        }

    def recheck(self) -> bool:
        """Every stored counterexample still violates its axiom."""
        return all(_violates(self.system, a, ce) for a, ce in self.counterexamples.items())


def _violates(system: SetSystem, axiom: str, ce: tuple) -> bool:
    inside = system.__contains__
    if axiom == "I1":
        return not inside(frozenset())
    if axiom == "I2":
        big, small = ce
        return small < big and inside(big) and not inside(small)
    if axiom == "I3":
        I, Imax = ce
        return inside(I) and inside(Imax) and not any(inside(I | {x}) for x in Imax - I)
    if axiom == "+":
        o1, o2, x = ce
        rest = (o1 | o2) - {x}
        return not any(c <= rest for c in circuits(system))
    if axiom == "*":
        I, J, y = ce
        return (
            inside(I) and inside(J) and not inside(J | {y})
            and not any(inside((J | {y}) - {x}) for x in J - I)
        )
    if axiom == "IM":
        return False
    raise ValueError(axiom)


def check_axioms(system: SetSystem, budget: int = 1 << 24) -> AxiomReport:
    """Exhaustive check of I1, I2, I3, IM, (+) and (*).

    (I3) compares every non-maximal member with every maximal one; (+) runs
    over pairs of distinct circuits; (*) over all (I, J, y) triples.
    """
    table = system.table
    n, N = system.n, len(table)
    members = [m for m in range(N) if table[m]]
    if len(members) ** 2 * max(n, 1) > budget:
        raise BudgetExceeded(f"{len(members)} members make the pairwise checks exceed {budget}")
    un = system.unmask
    verdicts = {a: True for a in AXIOMS}
    ces: dict[str, tuple] = {}

    def fail(axiom: str, *witness):
        if verdicts[axiom]:
            verdicts[axiom] = False
            ces[axiom] = witness

    if not table[0]:
        fail("I1", frozenset())
    for m in members:
        for bit in _bits(m):
            if not table[m ^ bit]:
                fail("I2", un(m), un(m ^ bit))
                break
        if not verdicts["I2"]:
            break

    full = N - 1
    extend = {m: [bit for bit in _bits(full & ~m) if table[m | bit]] for m in members}
    maximal = [m for m in members if not extend[m]]
    for I in members:
        if not extend[I]:
            continue
        for M in maximal:
            if not any(table[I | bit] for bit in _bits(M & ~I)):
                fail("I3", un(I), un(M))
                break
        if not verdicts["I3"]:
            break

    # (IM): a maximal member between I and X, found by repeated extension.
    if 3**n <= budget:
        for I in members:
            rest = full & ~I
            sub = rest
            while True:
                X = I | sub
                J = I
                grew = True
                while grew:
                    grew = False
                    for bit in _bits(X & ~J):
                        if table[J | bit]:
                            J |= bit
                            grew = True
                if any(table[J | bit] for bit in _bits(X & ~J)):
                    fail("IM", un(I), un(X))
                if sub == 0:
                    break
                sub = (sub - 1) & rest

    circuit = _circuit_masks(table)
    has_circuit = [False] * N
    for m in range(N):
        has_circuit[m] = circuit[m] or any(has_circuit[m ^ bit] for bit in _bits(m))
    circs = [m for m in range(N) if circuit[m]]
    for i, o1 in enumerate(circs):
        for o2 in circs[i + 1:]:
            for x in _bits(o1 & o2):
                if not has_circuit[(o1 | o2) & ~x]:
                    fail("+", un(o1), un(o2), next(iter(un(x))))
                    break

    for I in members:
        for J in members:
            for y in _bits(I & ~J):
                if table[J | y]:
                    continue
                if not any(table[(J | y) & ~x] for x in _bits(J & ~I)):
                    fail("*", un(I), un(J), next(iter(un(y))))
                    break
    return AxiomReport(verdicts, ces, system)


# -- finitarization -----------------------------------------------------------


def finitarize(system: SetSystem) -> SetSystem:
    """Sets all of whose finite subsets are members; on a finite ground set, all subsets."""
    table = system.table
    fin = [False] * len(table)
    for m in range(len(table)):
        fin[m] = table[m] and all(fin[m ^ bit] for bit in _bits(m))

    def member(S: frozenset[str]) -> bool:
        return fin[system.mask(S)]

    return SetSystem(system.ground, member, f"fin({system.provenance})")


def bases(system: SetSystem) -> list[frozenset[str]]:
    table = system.table
    full = len(table) - 1
    return [
        system.unmask(m)
        for m in range(len(table))
        if table[m] and not any(table[m | bit] for bit in _bits(full & ~m))
    ]


def nearly_finitary_gap(system: SetSystem) -> int:
    """Largest |B' - B| needed to extend a base B to a base B' of the finitarization."""
    fin_bases = bases(finitarize(system))
    gap = 0
    for B in bases(system):
        gap = max(gap, min((len(Bp - B) for Bp in fin_bases if B <= Bp), default=0))
    return gap


# -- domination diagnostics on presentations -----------------------------------


def fan_number(g: Digraph, v: str, B: Iterable[str]) -> int:
    """Most paths from v to B that pairwise share only v and their last vertex."""
    B = set(B) - {v}
    outs = g.out_edges(v)
    if not outs or not B:
        return 0
    taken = set(g.vertices)
    z = "B*"
    while z in taken:
        z += "*"
    copies = []
    for i in range(len(outs)):
        name = f"{v}#{i}"
        while name in taken:
            name += "#"
        taken.add(name)
        copies.append(name)
    verts = [x for x in g.vertices if x != v and x not in B] + copies + [z]
    # B collapses into one uncapacitated sink; v gets one copy per out-edge.
    edges = [
        Edge(e.id, e.tail, z if e.head in B else e.head)
        for e in g.edges
        if e.tail != v and e.head != v and e.tail not in B
    ]
    edges += [Edge(f"{c}:{e.id}", c, z if e.head in B else e.head) for c, e in zip(copies, outs) if e.head != v]
    h = Digraph(verts, edges)
    return linkage_value(LinkageProblem(h, tuple(copies), (), z, "directed-vertex"))


@dataclass(frozen=True)
class DominationReport:
    """κ_v per depth (None where v is absent), flagged vertices, ray-candidate counts.

    `flagged_counts[i]` is the number of vertices whose κ strictly rises over
    depths i, i+1, i+2; `flagged` lists those of the last window.
    """

    depths: tuple[int, ...]
    kappa: dict[str, tuple[int | None, ...]]
    flagged: tuple[str, ...]
    flagged_counts: tuple[int, ...]
    ray_counts: tuple[int, ...]
    finite: bool = False

    def to_json(self) -> dict:
        return {
            "depths": list(self.depths),
            "kappa": {v: list(k) for v, k in self.kappa.items()},
            "flagged_vertices": list(self.flagged),
            "flagged_per_window": list(self.flagged_counts),
            "ray_candidates": list(self.ray_counts),
            "finite": self.finite,
        }


def _rising(values: Sequence[int | None]) -> bool:
    tail = list(values[-3:])
    return len(tail) == 3 and None not in tail and tail[0] < tail[1] < tail[2]


def domination_diagnostics(
    p: GraphPresentation,
    B: Iterable[str] | None = None,
    depths: Sequence[int] = (4, 6, 8, 10, 12),
    rays: bool = True,
) -> DominationReport:
    """Finite evidence about dominating vertices and dominating rays.

    B defaults to the sinks of each truncation.  Ray candidates come from
    running the chain construction on the single-sink version of the
    presentation for as many steps as the depth.
    """
    depths = tuple(sorted(set(depths)))
    fixed = None if B is None else tuple(B)
    per_depth: list[dict[str, int]] = []
    for d in depths:
        pc = p.piece(d)
        sinks = fixed if fixed is not None else (pc.sinks or ((pc.b,) if pc.b else ()))
        per_depth.append({v: fan_number(pc.graph, v, sinks) for v in pc.graph.vertices if v not in sinks})
    order = [v for v in p.truncate(depths[-1]).vertices if v in per_depth[-1]]
    kappa = {v: tuple(vals.get(v) for vals in per_depth) for v in order}
    windows = [
        tuple(v for v in order if not p.finite and _rising(kappa[v][i : i + 3]))
        for i in range(len(depths) - 2)
    ]
    ray_counts: tuple[int, ...] = ()
    if rays and not p.finite:
        from gammoids.constructor import build_chain, stabilized_paths

        single = with_single_sink(p)
        counts = []
        for d in depths:
            chain = build_chain(single, steps=d, max_depth=max(64, 2 * d))
            verdicts = [c.verdict for c in stabilized_paths(chain, single)]
            counts.append(verdicts.count("dominating-ray-candidate"))
        ray_counts = tuple(counts)
    flagged = windows[-1] if windows else ()
    return DominationReport(depths, kappa, flagged, tuple(map(len, windows)), ray_counts, p.finite)


def nearly_finitary_verdict(report: DominationReport) -> str:
    """``no``, ``consistent-with-yes`` or ``undetermined``; never a proof."""
    if report.finite:
        return "consistent-with-yes"
    if _rising(report.flagged_counts) or _rising(report.ray_counts):
        return "no"
    if len(report.depths) < 3 or (report.flagged and len(report.flagged_counts) < 3):
        return "undetermined"
    return "consistent-with-yes"
