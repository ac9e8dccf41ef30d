"""The group-walking machine VM: both action models, acceptance, retargeting.

Tapes are finite-support dicts keyed by canonical elements; the blank symbol
is implicit.  The fixed-head model tracks an accumulated offset instead of
physically shifting the tape; `fixed_moving_equivalent` checks that
bookkeeping against a literal tape-shifting simulation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import MalformedInputError, RetargetSoundnessError
from .groups import Element, Group, Letters
from .patterns import Alphabet, Pattern, PatternCoding, check_consistency, Inconsistent, coding_length


@dataclass(frozen=True)
class GMachineSpec:
    """(Q, Sigma, blank, q0, QF, delta) with moves drawn from the group's S."""

    group: Group
    states: tuple[str, ...]
    accepting: frozenset[int]
    tape_alphabet: Alphabet
    blank: int
    delta: Mapping[tuple[int, int], tuple[int, int, int]]

    def __post_init__(self):
        n_sym, n_states = len(self.tape_alphabet), len(self.states)
        if not 0 <= self.blank < n_sym:
            raise MalformedInputError("blank symbol outside the tape alphabet")
        for q in self.accepting:
            if not 0 <= q < n_states:
                raise MalformedInputError("accepting state out of range")
        for sym in range(n_sym):
            for q in range(n_states):
                if (sym, q) not in self.delta:
                    raise MalformedInputError(
                        f"delta not total: missing ({sym}, {q})")
        for (sym, q), (w, r, move) in self.delta.items():
            if not (0 <= w < n_sym and 0 <= r < n_states):
                raise MalformedInputError("delta output out of range")
            if not 0 <= move < len(self.group.generators):
                raise MalformedInputError("delta move is not a generator id")

    @property
    def initial_state(self) -> int:
        return 0


@dataclass
class MachineConfig:
    """Moving-head configuration: finite-support tape, head element, state."""

    tape: dict[Element, int]
    head: Element
    state: int
    steps: int = 0

    def read(self, spec: GMachineSpec) -> int:
        return self.tape.get(self.head, spec.blank)


@dataclass
class FixedHeadConfig:
    """Fixed-head configuration: the tape is shifted via an offset element.

    The observable tape is x(h) = base(offset * h); stepping multiplies the
    offset on the right by the move generator instead of shifting every cell.
    """

    base: dict[Element, int]
    offset: Element
    state: int
    steps: int = 0

    def observable(self, group: Group, h: Element) -> Optional[int]:
        return self.base.get(group.multiply(self.offset, h))

    def observable_tape(self, group: Group) -> dict[Element, int]:
        inv = group.inverse_element(self.offset)
        return {group.multiply(inv, cell): v for cell, v in self.base.items()}


def initial_config(spec: GMachineSpec, p: Pattern) -> MachineConfig:
    tape = {}
    for e, v in p.items():
        if not 0 <= v < len(spec.tape_alphabet):
            raise MalformedInputError("pattern symbol outside tape alphabet")
        if v != spec.blank:
            tape[e] = v
    return MachineConfig(tape, spec.group.identity, spec.initial_state)


def step_moving(spec: GMachineSpec, cfg: MachineConfig) -> MachineConfig:
    """One moving-head step: write at the head, multiply the head by the move."""
    group = spec.group
    sym = cfg.read(spec)
    write, state, move = spec.delta[(sym, cfg.state)]
    tape = dict(cfg.tape)
    if write == spec.blank:
        tape.pop(cfg.head, None)
    else:
        tape[cfg.head] = write
    head = cfg.head if move == 0 else group.multiply_letter(cfg.head, move)
    return MachineConfig(tape, head, state, cfg.steps + 1)


def step_fixed(spec: GMachineSpec, cfg: FixedHeadConfig) -> FixedHeadConfig:
    """One fixed-head step via offset bookkeeping (no tape copy)."""
    group = spec.group
    sym = cfg.base.get(cfg.offset, spec.blank)
    write, state, move = spec.delta[(sym, cfg.state)]
    base = dict(cfg.base)
    if write == spec.blank:
        base.pop(cfg.offset, None)
    else:
        base[cfg.offset] = write
    offset = cfg.offset if move == 0 else group.multiply_letter(cfg.offset, move)
    return FixedHeadConfig(base, offset, state, cfg.steps + 1)


@dataclass(frozen=True)
class Accepted:
    steps: int


@dataclass(frozen=True)
class Exhausted:
    steps: int


RunOutcome = Union[Accepted, Exhausted]


def run_accepts(spec: GMachineSpec, p: Pattern, budget: int) -> RunOutcome:
    """Run the moving-head semantics from x^p until acceptance or budget."""
    cfg = initial_config(spec, p)
    for _ in range(budget + 1):
        if cfg.state in spec.accepting:
            return Accepted(cfg.steps)
        if cfg.steps >= budget:
            break
        cfg = step_moving(spec, cfg)
    return Exhausted(cfg.steps)


def trace_run(spec: GMachineSpec, p: Pattern, budget: int):
    """Yield (step, state, head, written symbol) records for the CLI."""
    cfg = initial_config(spec, p)
    while True:
        yield cfg
        if cfg.state in spec.accepting or cfg.steps >= budget:
            return
        cfg = step_moving(spec, cfg)


def fixed_moving_equivalent(spec: GMachineSpec, p: Pattern, steps: int) -> bool:
    """Dual-route conjugacy check of the two action models.

    Runs three trajectories: the production moving-head stepper, the
    production fixed-head stepper (offset bookkeeping), and an independent
    literal implementation of the fixed-head semantics that physically
    shifts its tape each step (in a prepend-oriented frame representation,
    so a shift costs one letter per cell).  At every step t it checks that
    all states agree, that the offset bookkeeping matches the moving head,
    and that the literally-shifted tape equals the moving tape conjugated
    by head(t)^-1.
    """
    group = spec.group
    moving = initial_config(spec, p)
    fixed = FixedHeadConfig(dict(moving.tape), group.identity, spec.initial_state)
    # the literal fixed-head tape, keyed by frame positions (head at origin)
    literal: dict = {group.frame_of_element(cell): v
                     for cell, v in moving.tape.items()}
    literal_state = spec.initial_state
    # frame positions of every moving-tape cell, maintained incrementally
    frame_of: dict[Element, object] = {cell: group.frame_of_element(cell)
                                       for cell in moving.tape}
    frame_origin = group.frame_identity()

    for _ in range(steps + 1):
        if fixed.state != moving.state or literal_state != moving.state:
            return False
        if fixed.offset != moving.head or fixed.base != moving.tape:
            return False
        projected = {frame_of[cell]: v for cell, v in moving.tape.items()}
        if projected != literal:
            return False
        if moving.steps >= steps:
            return True

        # advance the independent literal semantics
        sym = literal.get(frame_origin, spec.blank)
        write, literal_state, move = spec.delta[(sym, literal_state)]
        if write == spec.blank:
            literal.pop(frame_origin, None)
        else:
            literal[frame_origin] = write
        if move:
            inv = group.inverse_letter(move)
            literal = {group.frame_prepend(inv, k): v for k, v in literal.items()}

        # advance the production steppers and the frame cache
        head = moving.head
        moving = step_moving(spec, moving)
        fixed = step_fixed(spec, fixed)
        if head in moving.tape:
            frame_of[head] = frame_origin
        else:
            frame_of.pop(head, None)
        if move:
            inv = group.inverse_letter(move)
            frame_of = {cell: group.frame_prepend(inv, k)
                        for cell, k in frame_of.items()}


def retarget_generators(
    spec: GMachineSpec, gamma: Mapping[int, Sequence[int]]
) -> GMachineSpec:
    """Replace each move s' by a walk along gamma(s'), with gamma(s') =_G s'.

    Each original transition delta(a, q) = (b, r, s') becomes the entry walk
    (b, r_{s',1}, s_1), tape-ignoring intermediate steps, and a final stay
    move into r.
    """
    group = spec.group
    words: dict[int, Letters] = {}
    for (sym, q), (w, r, move) in spec.delta.items():
        if move in words:
            continue
        if move not in gamma:
            raise RetargetSoundnessError(f"gamma misses move generator {move}")
        word = group.check_word(gamma[move])
        if group.canonical(word + (group.inverse_letter(move),)):
            raise RetargetSoundnessError(
                f"gamma({group.generators[move].display}) is not equal in the group")
        words[move] = word

    states: list[str] = list(spec.states)
    index: dict[tuple[int, int, int], int] = {}
    for r in range(len(spec.states)):
        for move, word in words.items():
            for i in range(len(word)):
                index[(r, move, i)] = len(states)
                states.append(f"{spec.states[r]}~{group.generators[move].display}~{i}")

    delta: dict[tuple[int, int], tuple[int, int, int]] = {}
    for (sym, q), (w, r, move) in spec.delta.items():
        word = words[move]
        if not word:
            delta[(sym, q)] = (w, r, 0)
        else:
            delta[(sym, q)] = (w, index[(r, move, 0)], word[0])
    n_sym = len(spec.tape_alphabet)
    for (r, move, i), qid in index.items():
        word = words[move]
        if i + 1 < len(word):
            target = (index[(r, move, i + 1)], word[i + 1])
        else:
            target = (r, 0)
        for sym in range(n_sym):
            delta[(sym, qid)] = (sym, target[0], target[1])
    return GMachineSpec(group, tuple(states), spec.accepting,
                        spec.tape_alphabet, spec.blank, delta)


# -- multi-head machines ---------------------------------------------------


@dataclass(frozen=True)
class MultiHeadSpec:
    """n heads in lockstep, each on its own tape, sharing a joint state tuple.

    `delta` maps (symbols under each head, state tuple) to (written symbols,
    next states, moves); it may be a mapping or a total callable.
    """

    group: Group
    n: int
    states: tuple[str, ...]
    accepting: frozenset[int]
    tape_alphabet: Alphabet
    blank: int
    delta: object
    layer_roles: tuple[str, ...] = ()

    def lookup(self, symbols: tuple[int, ...], states: tuple[int, ...]):
        if callable(self.delta):
            return self.delta(symbols, states)
        return self.delta[(symbols, states)]


@dataclass
class MultiHeadConfig:
    tapes: list[dict[Element, int]]
    heads: list[Element]
    states: tuple[int, ...]
    steps: int = 0


def run_multihead(spec: MultiHeadSpec, p: Pattern, budget: int) -> RunOutcome:
    """Lockstep run; accepts when any coordinate reaches an accepting state."""
    group = spec.group
    tapes: list[dict[Element, int]] = [dict() for _ in range(spec.n)]
    for e, v in p.items():
        if v != spec.blank:
            tapes[0][e] = v
    heads = [group.identity] * spec.n
    states = tuple(0 for _ in range(spec.n))
    for step in range(budget + 1):
        if any(q in spec.accepting for q in states):
            return Accepted(step)
        if step >= budget:
            break
        symbols = tuple(tapes[i].get(heads[i], spec.blank) for i in range(spec.n))
        writes, states, moves = spec.lookup(symbols, states)
        for i in range(spec.n):
            if writes[i] == spec.blank:
                tapes[i].pop(heads[i], None)
            else:
                tapes[i][heads[i]] = writes[i]
            if moves[i] != 0:
                heads[i] = group.multiply_letter(heads[i], moves[i])
    return Exhausted(budget)


def single_head_as_multihead(spec: GMachineSpec) -> MultiHeadSpec:
    def delta(symbols, states):
        w, r, s = spec.delta[(symbols[0], states[0])]
        return (w,), (r,), (s,)

    return MultiHeadSpec(spec.group, 1, spec.states, spec.accepting,
                         spec.tape_alphabet, spec.blank, delta, ("tape",))


def acceptance_bound(spec: GMachineSpec, support_size: int) -> int:
    """|Q| * |F| * |Sigma|^|F|: steps before a bounded-support run must accept."""
    return len(spec.states) * support_size * len(spec.tape_alphabet) ** support_size


# -- oracle-machine bridge --------------------------------------------------


@dataclass(frozen=True)
class BallSimOutcome:
    kind: str           # "accepted" | "inconsistent" | "exhausted"
    steps: int = 0
    witness: Optional[tuple[Letters, Letters]] = None


def simulate_with_balls(spec: GMachineSpec, c: PatternCoding, budget: int) -> BallSimOutcome:
    """The oracle-side simulation: consistency first, then growing-ball runs.

    The inconsistent outcome stands in for the proof's immediate accept.  The
    ball B_k is realized lazily as the tape region the head can reach within
    k steps (the head moves one generator per step).
    """
    res = check_consistency(spec.group, c)
    if isinstance(res, Inconsistent):
        return BallSimOutcome("inconsistent", 0, res.witness)
    pattern = res.pattern
    n_start = 2 * coding_length(c)
    cfg = initial_config(spec, pattern)
    k = n_start
    while True:
        # simulate up to k steps total (resuming the single deterministic run)
        while cfg.steps < k:
            if cfg.state in spec.accepting:
                return BallSimOutcome("accepted", cfg.steps)
            cfg = step_moving(spec, cfg)
        if cfg.state in spec.accepting:
            return BallSimOutcome("accepted", cfg.steps)
        if k >= budget:
            return BallSimOutcome("exhausted", cfg.steps)
        k += 1
