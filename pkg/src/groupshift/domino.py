"""Machine -> origin-constrained domino instance over the product of the
group with an integer line, plus the free-product wrapper that removes the
origin constraint.

Cell symbols are component tuples (machine symbol, head state, star marker,
...).  Forbidden combinations are stored with per-component allowed-value
sets so the emitted family sizes match their closed forms exactly; a fully
expanded concrete-pattern representation would multiply the counts by every
wildcard dimension.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import MalformedInputError, UndeterminedError, UnsupportedGroupError
from .cayley import ball
from .groups import Element, FiniteGroup, FreeAbelianGroup, Group, direct_product, free_product
from .machines import GMachineSpec
from .patterns import Alphabet, Pattern

SYM, STATE, STAR = "sym", "state", "star"
COVER, MARKER = "cover", "marker"


@dataclass(frozen=True)
class ComponentAlphabet:
    """Named product alphabet; cell symbols are tuples of value indices."""

    components: tuple[tuple[str, tuple[str, ...]], ...]

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.components)

    def index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.components):
            if n == name:
                return i
        raise MalformedInputError(f"no component {name!r}")

    def values(self, name: str) -> tuple[str, ...]:
        return self.components[self.index(name)][1]

    def value_index(self, name: str, label: str) -> int:
        vals = self.values(name)
        try:
            return vals.index(label)
        except ValueError:
            raise MalformedInputError(f"{label!r} not a {name!r} value") from None

    def size(self) -> int:
        out = 1
        for _, vals in self.components:
            out *= len(vals)
        return out

    def symbols(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*(range(len(vals)) for _, vals in self.components))

    def format_symbol(self, sym: tuple[int, ...]) -> str:
        return "(" + ",".join(vals[v] for (_, vals), v in zip(self.components, sym)) + ")"


@dataclass(frozen=True)
class GOffset:
    """An offset inside the product group: a G part and an integer level."""

    g: Element
    dz: int


@dataclass(frozen=True)
class HOffset:
    """The h-th element of the finite free-product factor (coset-relative)."""

    h: int


Offset = Union[GOffset, HOffset]

# a cell requirement maps component index -> frozenset of allowed values
CellReq = tuple[tuple[int, frozenset[int]], ...]


@dataclass(frozen=True)
class DominoConstraint:
    """A forbidden combination: fires when every support cell matches."""

    support: tuple[Offset, ...]
    cells: tuple[CellReq, ...]
    tag: str

    def cell_matches(self, i: int, symbol: tuple[int, ...]) -> bool:
        return all(symbol[ci] in allowed for ci, allowed in self.cells[i])


def _req(alphabet: ComponentAlphabet, **by_name: object) -> CellReq:
    out = []
    for name, allowed in by_name.items():
        ci = alphabet.index(name)
        if isinstance(allowed, (set, frozenset, tuple, list)):
            vals = frozenset(allowed)
        else:
            vals = frozenset({allowed})
        out.append((ci, vals))
    return tuple(out)


@dataclass(frozen=True)
class WindowedA1:
    """Approximate the sofic one-head layer by bounded-distance exclusions."""

    radius: int


@dataclass(frozen=True)
class UserSftCover:
    """A caller-supplied SFT presentation of the one-head layer.

    `values` extends each cell with a hidden cover component; `constraints`
    are (support offsets, per-cell requirements) over component names, with
    requirements as {component: [labels]} dictionaries.
    """

    values: tuple[str, ...]
    constraints: tuple[tuple[tuple[tuple[str, int], ...],
                             tuple[Mapping[str, Sequence[str]], ...]], ...]


A1Mode = Union[WindowedA1, UserSftCover]


@dataclass(frozen=True)
class DominoInstance:
    g_group: Group
    alphabet: ComponentAlphabet
    constraints: tuple[DominoConstraint, ...]
    origin_symbol: Optional[tuple[int, ...]]
    h_group: Optional[FiniteGroup] = None

    def by_tag(self, tag: str) -> list[DominoConstraint]:
        return [c for c in self.constraints if c.tag == tag]

    def tags(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for c in self.constraints:
            out[c.tag] = out.get(c.tag, 0) + 1
        return out

    def product_group(self):
        return direct_product(self.g_group, FreeAbelianGroup(1, names=["z"]))


def compile_domino(group: Group, machine: GMachineSpec,
                   a1_mode: A1Mode) -> DominoInstance:
    """Emit the origin-constrained instance simulating the machine upward.

    The machine must have initial state first and a single accepting state
    last; head-state component value i+1 encodes machine state i, value 0
    the absence of a head.
    """
    if machine.group is not group:
        raise MalformedInputError("machine must walk the same group")
    n_states = len(machine.states)
    if machine.accepting != frozenset({n_states - 1}):
        raise MalformedInputError(
            "the construction expects exactly the last state accepting")
    sigma = machine.tape_alphabet.symbols
    k = n_states
    state_vals = tuple(str(i) for i in range(k + 1))
    components = [(SYM, sigma), (STATE, state_vals), (STAR, ("0", "*"))]
    if isinstance(a1_mode, UserSftCover):
        components.append((COVER, tuple(a1_mode.values)))
    alphabet = ComponentAlphabet(tuple(components))
    blank = machine.blank
    up = GOffset(group.identity, 1)
    here = GOffset(group.identity, 0)
    cons: list[DominoConstraint] = []

    # A2: no head -> the symbol may not change
    for a in range(len(sigma)):
        for b in range(len(sigma)):
            if a != b:
                cons.append(DominoConstraint(
                    (here, up),
                    (_req(alphabet, sym=a, state=0), _req(alphabet, sym=b)),
                    "A2"))
    # A3 = B1 u B2, one pair of rules per delta entry
    for (a, q), (b, r, s) in machine.delta.items():
        base = _req(alphabet, sym=a, state=q + 1)
        for c in range(len(sigma)):
            if c != b:
                cons.append(DominoConstraint(
                    (here, up), (base, _req(alphabet, sym=c)), "B1"))
        move_off = GOffset(group.element((s,)) if s else group.identity, 1)
        for t in range(k + 1):
            if t != r + 1:
                cons.append(DominoConstraint(
                    (here, move_off), (base, _req(alphabet, state=t)), "B2"))
    # A4: the accepting state never appears
    for a in range(len(sigma)):
        cons.append(DominoConstraint(
            (here,), (_req(alphabet, sym=a, state=k),), "A4"))
    # A1: at most one head per level
    heads = frozenset(range(1, k + 1))
    if isinstance(a1_mode, WindowedA1):
        for g in ball(group, a1_mode.radius).sorted_elements():
            if g == group.identity:
                continue
            cons.append(DominoConstraint(
                (here, GOffset(g, 0)),
                (_req(alphabet, state=heads), _req(alphabet, state=heads)),
                "A1"))
    else:
        for support_spec, reqs in a1_mode.constraints:
            support = tuple(GOffset(group.element(group.parse_word(w)), dz)
                            for w, dz in support_spec)
            cells = tuple(
                _req(alphabet, **{name: frozenset(
                    alphabet.value_index(name, label) for label in labels)
                    for name, labels in req.items()})
                for req in reqs)
            cons.append(DominoConstraint(support, cells, "A1"))
    # X_aux: a star propagates along every generator within its level
    for s in group.nonidentity_ids:
        cons.append(DominoConstraint(
            (here, GOffset(group.element((s,)), 0)),
            (_req(alphabet, star=1), _req(alphabet, star=0)),
            "X_aux"))
    # a star cell must carry a blank machine symbol
    for a in range(len(sigma)):
        if a != blank:
            cons.append(DominoConstraint(
                (here,), (_req(alphabet, star=1, sym=a),), "star_rule"))
    origin = [0] * len(alphabet.components)
    origin[alphabet.index(SYM)] = blank
    origin[alphabet.index(STATE)] = 1
    origin[alphabet.index(STAR)] = 1
    return DominoInstance(group, alphabet, tuple(cons), tuple(origin))


def free_product_layer(h: FiniteGroup, base: DominoInstance) -> DominoInstance:
    """Add the finite-factor marker layer and drop the origin constraint.

    Every coset of the finite factor must contain exactly one marked cell,
    and a marked cell must carry the origin symbol of the base instance.
    """
    if base.h_group is not None:
        raise MalformedInputError("instance already carries a free-product layer")
    if h.order <= 1:
        raise UnsupportedGroupError("the free-product factor must be nontrivial")
    if base.origin_symbol is None:
        raise MalformedInputError("base instance lacks an origin symbol")
    alphabet = ComponentAlphabet(base.alphabet.components + ((MARKER, ("0", "*")),))
    cons: list[DominoConstraint] = [
        DominoConstraint(c.support, c.cells, c.tag) for c in base.constraints]
    m = h.order
    marker_ci = alphabet.index(MARKER)
    for bits in itertools.product((0, 1), repeat=m):
        if sum(bits) == 1:
            continue
        support = tuple(HOffset(i) for i in range(m))
        cells = tuple(((marker_ci, frozenset({bit})),) for bit in bits)
        cons.append(DominoConstraint(support, cells, "Y_aux"))
    # coupling: a marked cell carries the old origin symbol
    for ci, want in enumerate(base.origin_symbol):
        name, vals = base.alphabet.components[ci]
        others = frozenset(range(len(vals))) - {want}
        if others:
            cons.append(DominoConstraint(
                (GOffset(base.g_group.identity, 0),),
                (((marker_ci, frozenset({1})), (ci, others)),),
                "Y_aux"))
    return DominoInstance(base.g_group, alphabet, tuple(cons), None, h_group=h)


# -- window verification -------------------------------------------------------


@dataclass(frozen=True)
class Satisfiable:
    witness: Pattern


@dataclass(frozen=True)
class Unsatisfiable:
    pass


@dataclass(frozen=True)
class Undetermined:
    nodes: int


VerifyOutcome = Union[Satisfiable, Unsatisfiable, Undetermined]

Cell = tuple[Element, int]


def window_cells(instance: DominoInstance, radius_g: int, height_z: int) -> list[Cell]:
    """Level-major window: each level is a ball of the G part, bottom first."""
    base = ball(instance.g_group, radius_g).sorted_elements()
    return [(g, z) for z in range(height_z + 1) for g in base]


def grounded_violations(
    instance: DominoInstance,
    assign: Mapping[Cell, tuple[int, ...]],
    touched: Optional[Cell] = None,
) -> list[tuple[DominoConstraint, Cell]]:
    """Fully-assigned forbidden combinations (optionally through one cell)."""
    group = instance.g_group
    out = []
    for con in instance.constraints:
        if any(isinstance(o, HOffset) for o in con.support):
            raise UnsupportedGroupError(
                "free-product instances are not window-verifiable")
        anchors: Iterable[Cell]
        if touched is None:
            anchors = list(assign)
            anchor_indices = [0]
        else:
            anchors = [touched]
            anchor_indices = range(len(con.support))
        hit = False
        for cell in anchors:
            for ai in anchor_indices:
                off = con.support[ai]
                g0 = group.multiply(cell[0], group.inverse_element(off.g))
                z0 = cell[1] - off.dz
                ok = True
                for i, o in enumerate(con.support):
                    target = (group.multiply(g0, o.g), z0 + o.dz)
                    sym = assign.get(target)
                    if sym is None or not con.cell_matches(i, sym):
                        ok = False
                        break
                if ok:
                    out.append((con, (g0, z0)))
                    hit = True
                    break
            if hit:
                break
    return out


def check_window_assignment(
    instance: DominoInstance, assign: Mapping[Cell, tuple[int, ...]]
) -> list[tuple[DominoConstraint, Cell]]:
    """Full constraint scan of an explicit window assignment."""
    group = instance.g_group
    out = []
    for con in instance.constraints:
        if any(isinstance(o, HOffset) for o in con.support):
            raise UnsupportedGroupError(
                "free-product instances are not window-verifiable")
        for cell in assign:
            g0 = group.multiply(cell[0], group.inverse_element(con.support[0].g))
            z0 = cell[1] - con.support[0].dz
            ok = True
            for i, o in enumerate(con.support):
                target = (group.multiply(g0, o.g), z0 + o.dz)
                sym = assign.get(target)
                if sym is None or not con.cell_matches(i, sym):
                    ok = False
                    break
            if ok:
                out.append((con, (g0, z0)))
    return out


def verify_reduction_window(
    instance: DominoInstance,
    radius_g: int,
    height_z: int,
    budget: int = 10_000_000,
) -> VerifyOutcome:
    """Exhaustive backtracking search for an admissible total window
    assignment containing the origin symbol at the base of the window."""
    cells = window_cells(instance, radius_g, height_z)
    symbols = list(instance.alphabet.symbols())
    assign: dict[Cell, tuple[int, ...]] = {}
    origin_cell = (instance.g_group.identity, 0)
    if instance.origin_symbol is not None:
        assign[origin_cell] = tuple(instance.origin_symbol)
        if grounded_violations(instance, assign, origin_cell):
            return Unsatisfiable()
    free = [c for c in cells if c not in assign]
    nodes = 0

    def search(i: int) -> bool:
        nonlocal nodes
        if i == len(free):
            return True
        cell = free[i]
        for sym in symbols:
            nodes += 1
            if nodes > budget:
                raise UndeterminedError(f"window search exceeded {budget} nodes")
            assign[cell] = sym
            if not grounded_violations(instance, assign, cell):
                if search(i + 1):
                    return True
            del assign[cell]
        return False

    try:
        found = search(0)
    except UndeterminedError:
        return Undetermined(nodes)
    if not found:
        return Unsatisfiable()
    product = instance.product_group()
    witness = {}
    for (g, z), sym in assign.items():
        cell = product.pair([g, _z_element(product, z)])
        witness[cell] = sym
    return Satisfiable(Pattern(witness))


def _z_element(product, z: int):
    zg = product.factors[1]
    letter = 1 if z >= 0 else 2
    return zg.element((letter,) * abs(z))
