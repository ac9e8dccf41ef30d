"""The explicit path-building and ball-visiting machines, and the bridge
from classical oracle machines to group-walking machines.

The path machine's six transition rules are transcribed literally into a
total table; the visit machine and the oracle simulator are layered
interpreters whose supervision rules (gating, collision resets) live outside
the per-layer tables, since they depend on head positions and global tape
state that no finite (Sigma^n, Q^n) table can see.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    GroupExhaustedError,
    MalformedInputError,
    UndeterminedError,
    UnsupportedGroupError,
)
from .groups import Element, Group, Letters
from .machines import Accepted, Exhausted, GMachineSpec, RunOutcome
from .patterns import Alphabet, Pattern

# tape component codes: c1 in {BLANK, START} + gens, c2 in {BLANK, MARK},
# c3 in {BLANK} + gens
_C1_BLANK, _C1_START = 0, 1
_C2_BLANK, _C2_MARK = 0, 1
_C3_BLANK = 0

_STATE_INIT = 0
_STATE_BACK = 1


def _sym_name(group: Group, dirs: Sequence[int], c1: int, c2: int, c3: int) -> str:
    first = {"0": "_", "1": ">"}.get(str(c1)) if c1 in (0, 1) else None
    if first is None:
        first = group.generators[dirs[c1 - 2]].display
    second = "#" if c2 == _C2_MARK else "_"
    third = "_" if c3 == _C3_BLANK else group.generators[dirs[c3 - 1]].display
    return f"{first}|{second}|{third}"


class PathMachine:
    """The path builder: symbol/state tables plus decoding helpers."""

    def __init__(self, group: Group):
        if group.is_finite():
            raise UnsupportedGroupError("the path machine needs an infinite group")
        self.group = group
        self.dirs: tuple[int, ...] = group.nonidentity_ids
        k = len(self.dirs)
        if k < 1:
            raise UnsupportedGroupError("need at least one non-identity generator")
        self.k = k
        self.n_c1, self.n_c2, self.n_c3 = k + 2, 2, k + 1
        names = [_sym_name(group, self.dirs, c1, c2, c3)
                 for c1 in range(self.n_c1)
                 for c2 in range(self.n_c2)
                 for c3 in range(self.n_c3)]
        self.alphabet = Alphabet(tuple(names))
        self.blank = self.sym(0, 0, 0)
        states = ["I", "B"]
        for i in range(k):
            d = group.generators[self.dirs[i]].display
            states.extend([f"{d}<", f"{d}>"])
        states.append("DEAD")
        self.states = tuple(states)
        self.dead_state = len(states) - 1
        self.spec = self._build_spec()

    def sym(self, c1: int, c2: int, c3: int) -> int:
        return (c1 * self.n_c2 + c2) * self.n_c3 + c3

    def unsym(self, s: int) -> tuple[int, int, int]:
        c3 = s % self.n_c3
        rest = s // self.n_c3
        return (rest // self.n_c2, rest % self.n_c2, c3)

    def state_left(self, i: int) -> int:
        return 2 + 2 * i

    def state_right(self, i: int) -> int:
        return 3 + 2 * i

    def _build_spec(self) -> GMachineSpec:
        group, dirs, k = self.group, self.dirs, self.k
        delta: dict[tuple[int, int], tuple[int, int, int]] = {}
        n_states = len(self.states)
        for s in range(len(self.alphabet)):
            for q in range(n_states):
                delta[(s, q)] = (s, q, 0)  # filler self-loop; overwritten below
        blank = self.blank
        # rule 1: initialize at the origin, head out towards the first direction
        delta[(blank, _STATE_INIT)] = (
            self.sym(_C1_START, _C2_MARK, 1), self.state_left(0), dirs[0])
        for i in range(k):
            left, right = self.state_left(i), self.state_right(i)
            # rule 2: fresh cell: record the arrival generator, start trying
            # the first direction (via state g1->, staying put)
            delta[(blank, left)] = (
                self.sym(2 + i, _C2_MARK, _C3_BLANK), self.state_right(0), 0)
            for c1 in range(self.n_c1):
                for c3 in range(self.n_c3):
                    marked = self.sym(c1, _C2_MARK, c3)
                    # rule 3: set the outgoing link and move out
                    delta[(marked, right)] = (
                        self.sym(c1, _C2_MARK, 1 + i), left, dirs[i])
                    # rule 4: arrived at an occupied cell: bounce back
                    delta[(marked, left)] = (
                        marked, _STATE_BACK, group.inverse_letter(dirs[i]))
        # rules 5/6: backtracking at a marked cell with outgoing link g_i
        for c1 in range(self.n_c1):
            for i in range(k):
                marked = self.sym(c1, _C2_MARK, 1 + i)
                if c1 == _C1_BLANK:
                    continue  # marked cells always carry START or a generator
                if i + 1 < k:
                    delta[(marked, _STATE_BACK)] = (
                        marked, self.state_right(i + 1), 0)
                elif c1 == _C1_START:
                    # rule 6 deliberately lacks i = k at the origin: every
                    # direction from the root is exhausted (finite group)
                    delta[(marked, _STATE_BACK)] = (marked, self.dead_state, 0)
                else:
                    # erase the dead end and step back along the arrival link
                    delta[(marked, _STATE_BACK)] = (
                        blank, _STATE_BACK,
                        group.inverse_letter(dirs[c1 - 2]))
        return GMachineSpec(group, self.states, frozenset(), self.alphabet,
                            self.blank, delta)


def build_m_path(group: Group) -> GMachineSpec:
    """The literal six-rule path machine over the group's direction order."""
    return PathMachine(group).spec


class PathRun:
    """Instrumented path-machine run with per-step simple-path invariants.

    Tracks the marked path incrementally: every mark must extend the tip by
    one Cayley edge into an unmarked cell, every erase must remove exactly
    the tip.  `check_full` re-walks the arrival links from the tip to the
    root as the deep (non-incremental) verification.
    """

    def __init__(self, machine: PathMachine, check: bool = True):
        self.m = machine
        self.group = machine.group
        self.tape: dict[Element, int] = {}
        self.head: Element = self.group.identity
        self.state: int = _STATE_INIT
        self.steps = 0
        self.check = check
        self.path: list[Element] = []
        self.path_set: set[Element] = set()
        self.arrival: list[int] = []  # letter used to reach path[i] from path[i-1]
        self.max_path_len = 0

    def read(self) -> int:
        return self.tape.get(self.head, self.m.blank)

    def _peek(self) -> tuple[int, int, int]:
        return self.m.spec.delta[(self.read(), self.state)]

    def step(self) -> Optional[tuple[str, Element]]:
        """Advance one step; returns a ('mark'|'erase', cell) event or None."""
        m, group = self.m, self.group
        sym = self.read()
        write, state, move = m.spec.delta[(sym, self.state)]
        if state == m.dead_state:
            raise GroupExhaustedError(
                "every direction from the root is exhausted")
        event: Optional[tuple[str, Element]] = None
        _, was_marked, _ = m.unsym(sym)
        _, now_marked, _ = m.unsym(write)
        cell = self.head
        if self.check:
            self._check_transition(sym, was_marked, now_marked)
        if write == m.blank:
            self.tape.pop(cell, None)
        else:
            self.tape[cell] = write
        if was_marked == _C2_BLANK and now_marked == _C2_MARK:
            self.path.append(cell)
            self.path_set.add(cell)
            self.arrival.append(0 if self.state == _STATE_INIT
                                else m.dirs[(self.state - 2) // 2])
            self.max_path_len = max(self.max_path_len, len(self.path))
            event = ("mark", cell)
        elif was_marked == _C2_MARK and now_marked == _C2_BLANK:
            self.path.pop()
            self.path_set.discard(cell)
            self.arrival.pop()
            event = ("erase", cell)
        self.state = state
        if move:
            self.head = group.multiply_letter(self.head, move)
        self.steps += 1
        return event

    def _check_transition(self, sym: int, was_marked: int, now_marked: int) -> None:
        m, group = self.m, self.group
        if was_marked == _C2_BLANK and now_marked == _C2_MARK:
            if self.head in self.path_set:
                raise AssertionError("marking an already-marked cell")
            if self.state == _STATE_INIT:
                if self.path or self.head != group.identity:
                    raise AssertionError("init mark away from the root")
            else:
                i = (self.state - 2) // 2
                expected = group.multiply_letter(self.path[-1], m.dirs[i])
                if expected != self.head:
                    raise AssertionError("mark does not extend the tip by one edge")
        elif was_marked == _C2_MARK and now_marked == _C2_BLANK:
            if not self.path or self.path[-1] != self.head:
                raise AssertionError("erase not at the tip")
            if len(self.path) == 1:
                raise AssertionError("erasing the root")
        if len(self.path) != len(self.path_set):
            raise AssertionError("path list and marked set diverged")

    def run(self, steps: int) -> None:
        for _ in range(steps):
            self.step()

    def check_full(self) -> None:
        """Walk the stored arrival links from the tip back to the root."""
        m, group = self.m, self.group
        if not self.path:
            return
        if self.path[0] != group.identity:
            raise AssertionError("path root is not the identity")
        seen = set()
        cell = self.path[-1]
        for expected in reversed(self.path):
            if cell != expected or cell in seen:
                raise AssertionError("arrival links do not retrace the path")
            seen.add(cell)
            c1, c2, _ = m.unsym(self.tape.get(cell, m.blank))
            if c2 != _C2_MARK:
                raise AssertionError("path cell lost its mark")
            if cell == self.path[0]:
                if c1 != _C1_START:
                    raise AssertionError("root does not carry the start marker")
                break
            if c1 in (_C1_BLANK, _C1_START):
                raise AssertionError("non-root cell carries no arrival link")
            cell = group.multiply_letter(
                cell, group.inverse_letter(m.dirs[c1 - 2]))

    def path_word(self) -> Letters:
        return tuple(self.arrival[1:])


class GatedPathRun(PathRun):
    """A path run restricted to paths of length <= depth_limit.

    When an extension would exceed the limit, the machine behaves exactly as
    if the target cell were occupied (the bounce rule).  Reaching the
    exhausted-root transition reports completion instead of raising.
    """

    def __init__(self, machine: PathMachine, depth_limit: int, check: bool = True):
        super().__init__(machine, check=check)
        self.depth_limit = depth_limit
        self.completed = False

    def step(self) -> Optional[tuple[str, Element]]:
        m = self.m
        sym = self.read()
        write, state, move = m.spec.delta[(sym, self.state)]
        if state == m.dead_state:
            self.completed = True
            return None
        if (2 <= self.state and self.state % 2 == 0  # some g_i<-  (arriving)
                and sym == m.blank
                and len(self.path) >= self.depth_limit + 1):
            # gate: pretend the cell is occupied and bounce back
            i = (self.state - 2) // 2
            self.state = _STATE_BACK
            self.head = self.group.multiply_letter(
                self.head, self.group.inverse_letter(m.dirs[i]))
            self.steps += 1
            return None
        return super().step()


@dataclass
class VisitEvent:
    kind: str                    # "visit" | "increment" | "reset"
    n: int
    cell: Optional[Element] = None


class VisitMachine:
    """Three layers: a free path, a binary counter on its prefix, and a
    depth-gated path whose marks enumerate the ball B_n.

    The counter holds the current n in binary along the first layer's path
    prefix, most significant cell nearest the root.  If the first layer ever
    backtracks over a counter cell, layers two and three are erased and
    restart at n = 1.
    """

    n_layers = 3
    layer_roles = ("path", "counter", "bounded-path")

    def __init__(self, group: Group, check: bool = True):
        self.group = group
        self.machine = PathMachine(group)
        self.layer1 = PathRun(self.machine, check=check)
        self.counter_tape: dict[Element, int] = {}
        self.n = 1
        self._counter_pending = True
        self.layer3 = GatedPathRun(self.machine, self.n, check=check)
        self.events: list[VisitEvent] = []
        self.check = check
        self.ticks = 0

    # -- counter -----------------------------------------------------------

    def _write_counter(self) -> bool:
        bits = bin(self.n)[2:]
        if len(self.layer1.path) < len(bits):
            return False
        self.counter_tape = {
            self.layer1.path[i]: int(bits[i]) for i in range(len(bits))}
        return True

    def counter_value(self) -> int:
        """Decode n from the counter cells (ground truth for tests)."""
        bits = []
        for cell in self.layer1.path:
            if cell in self.counter_tape:
                bits.append(str(self.counter_tape[cell]))
            else:
                break
        return int("".join(bits), 2) if bits else 0

    def _reset_upper_layers(self) -> None:
        self.n = 1
        self.counter_tape = {}
        self._counter_pending = True
        self.layer3 = GatedPathRun(self.machine, self.n, check=self.check)

    # -- stepping ------------------------------------------------------------

    def tick(self) -> None:
        ev = self.layer1.step()
        if ev is not None and ev[0] == "erase" and ev[1] in self.counter_tape:
            self._reset_upper_layers()
            self.events.append(VisitEvent("reset", self.n))
            self.ticks += 1
            return
        if self._counter_pending:
            if self._write_counter():
                self._counter_pending = False
            else:
                self.ticks += 1
                return
        ev3 = self.layer3.step()
        if ev3 is not None and ev3[0] == "mark":
            self.events.append(VisitEvent("visit", self.n, ev3[1]))
        if self.layer3.completed:
            self.n += 1
            self._counter_pending = not self._write_counter()
            self.layer3 = GatedPathRun(self.machine, self.n, check=self.check)
            self.events.append(VisitEvent("increment", self.n))
        self.ticks += 1

    def run(self, ticks: int) -> list[VisitEvent]:
        for _ in range(ticks):
            self.tick()
        return self.events

    def run_until_n(self, target: int, budget: int) -> list[VisitEvent]:
        for _ in range(budget):
            if self.n > target:
                return self.events
            self.tick()
        raise UndeterminedError(
            f"visit machine did not pass n={target} within {budget} ticks")


def build_m_visit(group: Group, check: bool = True) -> VisitMachine:
    return VisitMachine(group, check=check)


# -- classical one-sided two-tape machines with an oracle hook ----------------


@dataclass(frozen=True)
class QueryHook:
    """Entering `trigger` reads the work tape up to the first blank as a
    word and jumps to `yes` or `no` according to the oracle's answer."""

    trigger: int
    yes: int
    no: int


@dataclass(frozen=True)
class ClassicalMachineSpec:
    """One-sided two-tape machine over token alphabets.

    Missing delta entries halt the machine in a rejecting loop, so tables
    stay sparse.  The input tape holds pattern-coding tokens appended by the
    harvest layer; the work tape is private.
    """

    states: tuple[str, ...]
    accepting: frozenset[int]
    input_tokens: tuple[str, ...]
    work_tokens: tuple[str, ...]          # [0] is the work blank
    delta: Mapping[tuple[int, str, str], tuple[str, int, int, int]]
    query: Optional[QueryHook] = None

    def __post_init__(self):
        for (q, tin, twork), (w, din, dwork, r) in self.delta.items():
            if not 0 <= q < len(self.states) or not 0 <= r < len(self.states):
                raise MalformedInputError("classical delta state out of range")
            if w not in self.work_tokens:
                raise MalformedInputError(f"classical delta writes unknown token {w!r}")
            if din not in (-1, 0, 1) or dwork not in (-1, 0, 1):
                raise MalformedInputError("classical delta moves must be -1/0/1")


INPUT_BLANK = "_"


class ClassicalRun:
    """Interpreter for ClassicalMachineSpec over a growing input token list."""

    def __init__(self, spec: ClassicalMachineSpec, oracle):
        self.spec = spec
        self.oracle = oracle
        self.reset()

    def reset(self) -> None:
        self.state = 0
        self.in_pos = 0
        self.work_pos = 0
        self.work: dict[int, str] = {}
        self.halted = False

    def accepted(self) -> bool:
        return self.state in self.spec.accepting

    def step(self, input_tokens: Sequence[str]) -> None:
        if self.halted or self.accepted():
            return
        spec = self.spec
        if spec.query and self.state == spec.query.trigger:
            word_tokens = []
            pos = 0
            blank = spec.work_tokens[0]
            while self.work.get(pos, blank) != blank:
                word_tokens.append(self.work[pos])
                pos += 1
            self.state = spec.query.yes if self.oracle(word_tokens) else spec.query.no
            return
        tin = input_tokens[self.in_pos] if self.in_pos < len(input_tokens) else INPUT_BLANK
        twork = self.work.get(self.work_pos, spec.work_tokens[0])
        entry = spec.delta.get((self.state, tin, twork))
        if entry is None:
            self.halted = True
            return
        write, din, dwork, nxt = entry
        if write == spec.work_tokens[0]:
            self.work.pop(self.work_pos, None)
        else:
            self.work[self.work_pos] = write
        self.in_pos = max(0, self.in_pos + din)
        self.work_pos = max(0, self.work_pos + dwork)
        self.state = nxt


def coding_tokens(group: Group, word: Letters, symbol_label: str) -> list[str]:
    return ["("] + [group.generators[x].display for x in word] + [",", symbol_label, ")"]


class OracleSimulator:
    """Six cooperating layers turning a classical oracle machine into a
    pattern-accepting group walker.

    store: the input pattern, read-only.  path: houses the simulated
    one-sided tapes.  visit: enumerates balls; harvest (the nexus layer)
    writes (word, symbol) tokens for visited non-blank cells onto the
    simulated input tape and restarts the simulation, since the coding got
    extended.  oracle: answers word-problem calls by walking the queried
    word and testing for return to the marked origin.  sim: the classical
    machine itself.
    """

    layer_roles = ("store", "path", "visit", "oracle", "harvest", "sim")
    n_layers = 6

    def __init__(self, group: Group, classical: ClassicalMachineSpec,
                 pattern_alphabet: Alphabet, sim_steps_per_tick: int = 4):
        self.group = group
        self.classical = classical
        self.pattern_alphabet = pattern_alphabet
        self.sim_steps_per_tick = sim_steps_per_tick
        self.oracle_calls: list[tuple[Letters, bool]] = []

    # -- the oracle layer ---------------------------------------------------

    def oracle_answer(self, word: Iterable[int]) -> bool:
        """Mark the origin, walk the word, accept iff back on the mark."""
        group = self.group
        marked = group.identity
        cell = group.identity
        for letter in group.check_word(word):
            cell = group.multiply_letter(cell, letter)
        answer = cell == marked
        self.oracle_calls.append((tuple(word), answer))
        return answer

    def _oracle_on_tokens(self, tokens: Sequence[str]) -> bool:
        word = self.group.parse_word(" ".join(tokens))
        return self.oracle_answer(word)

    # -- the full composition -------------------------------------------------

    def run(self, p: Pattern, budget: int) -> RunOutcome:
        group = self.group
        store = {cell: v for cell, v in p.items()}
        visit = VisitMachine(group, check=False)
        harvested: set[Element] = set()
        input_tokens: list[str] = []
        sim = ClassicalRun(self.classical, self._oracle_on_tokens)
        consumed = 0
        for tick in range(budget):
            if sim.accepted():
                return Accepted(tick)
            visit.tick()
            # harvest layer: new visits of stored cells extend the coding
            new_events = visit.events[consumed:]
            consumed = len(visit.events)
            extended = False
            for ev in new_events:
                if ev.kind != "visit" or ev.cell is None:
                    continue
                if ev.cell in harvested or ev.cell not in store:
                    continue
                word = visit.layer3.path_word()
                label = self.pattern_alphabet[store[ev.cell]]
                input_tokens.extend(coding_tokens(group, word, label))
                harvested.add(ev.cell)
                extended = True
            if extended:
                sim.reset()  # the pattern coding grew: restart the work tape
            if len(visit.layer1.path) < _sim_tape_use(sim, input_tokens):
                # the free path backtracked into simulated-tape territory
                sim.reset()
            for _ in range(self.sim_steps_per_tick):
                sim.step(input_tokens)
            if sim.accepted():
                return Accepted(tick + 1)
        return Exhausted(budget)


def _sim_tape_use(sim: ClassicalRun, input_tokens: Sequence[str]) -> int:
    width = max(len(input_tokens), sim.work_pos + 1, sim.in_pos + 1)
    if sim.work:
        width = max(width, max(sim.work) + 1)
    return width


def build_oracle_simulator(
    group: Group,
    classical: ClassicalMachineSpec,
    pattern_alphabet: Alphabet,
    sim_steps_per_tick: int = 4,
) -> OracleSimulator:
    return OracleSimulator(group, classical, pattern_alphabet, sim_steps_per_tick)


# -- ready-made classical machines (used by tests and the CLI) ----------------


def classical_accept_all() -> ClassicalMachineSpec:
    return ClassicalMachineSpec(
        states=("start", "yes"), accepting=frozenset({1}),
        input_tokens=("(", ")", ",", INPUT_BLANK), work_tokens=("_",),
        delta={(0, tok, "_"): ("_", 0, 0, 1)
               for tok in ("(", ")", ",", INPUT_BLANK)})


def classical_contains_entry(
    group: Group, word: Letters, symbol_label: str,
    extra_symbols: Sequence[str] = (),
) -> ClassicalMachineSpec:
    """Accept iff the input token stream contains the exact (word, symbol)
    entry; waits in a rejecting halt at the end of the current input."""
    target = coding_tokens(group, word, symbol_label)
    gen_tokens = tuple(g.display for g in group.generators if not g.is_identity)
    tokens = tuple(dict.fromkeys(
        ("(", ")", ",") + gen_tokens + tuple(extra_symbols) + (symbol_label,)))
    n = len(target)
    states = tuple(f"m{i}" for i in range(n)) + ("yes",)
    delta: dict[tuple[int, str, str], tuple[str, int, int, int]] = {}
    for i in range(n):
        for tok in tokens:
            if tok == target[i]:
                nxt = n if i == n - 1 else i + 1
            elif tok == target[0]:
                nxt = 1
            else:
                nxt = 0
            delta[(i, tok, "_")] = ("_", 1, 0, nxt)
    return ClassicalMachineSpec(states, frozenset({n}), tokens + (INPUT_BLANK,),
                                ("_",), delta)


def classical_query_word(group: Group, word: Letters) -> ClassicalMachineSpec:
    """Write the fixed word on the work tape, query the oracle, accept on yes."""
    letters = [group.generators[x].display for x in word]
    n = len(letters)
    states = tuple(f"w{i}" for i in range(n)) + ("ask", "yes", "no")
    work_tokens = ("_",) + tuple(dict.fromkeys(letters))
    delta: dict[tuple[int, str, str], tuple[str, int, int, int]] = {}
    for i, letter in enumerate(letters):
        delta[(i, INPUT_BLANK, "_")] = (letter, 0, 1, i + 1)
    if n == 0:
        pass  # starts directly in the ask state below
    states_ask = n
    spec = ClassicalMachineSpec(
        states=states if n else ("ask", "yes", "no"),
        accepting=frozenset({states_ask + 1 if n else 1}),
        input_tokens=(INPUT_BLANK,),
        work_tokens=work_tokens,
        delta=delta,
        query=QueryHook(trigger=states_ask if n else 0,
                        yes=(states_ask + 1) if n else 1,
                        no=(states_ask + 2) if n else 2))
    return spec
