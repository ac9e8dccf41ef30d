"""JSON schemas for groups, codings, patterns, subshifts, machines and
emitted constraint systems, plus the reproducible run manifest."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from .errors import MalformedInputError
from .domino import (
    ComponentAlphabet,
    DominoConstraint,
    DominoInstance,
    GOffset,
    HOffset,
    UserSftCover,
    WindowedA1,
)
from .families import (
    builtin_amenable_witness,
    builtin_delone,
    builtin_mirror,
    builtin_one_or_less,
)
from .groups import (
    BaumslagSolitarGroup,
    DirectProductGroup,
    Element,
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    FreeProductGroup,
    Group,
    RewritingGroup,
)
from .machines import GMachineSpec
from .patterns import Alphabet, Pattern, PatternCoding, coding
from .subshifts import FiniteFamily, SubshiftSpec

VERSION = "0.1.0"


# -- groups --------------------------------------------------------------------


def group_from_json(obj: Mapping[str, Any]) -> Group:
    kind = obj.get("kind")
    if kind == "free":
        return FreeGroup(int(obj["rank"]), obj.get("names"))
    if kind == "free_abelian":
        return FreeAbelianGroup(int(obj["rank"]), obj.get("names"))
    if kind == "bs":
        return BaumslagSolitarGroup(int(obj["n"]))
    if kind == "finite":
        return FiniteGroup(obj["table"], obj.get("names"))
    if kind == "direct_product":
        return DirectProductGroup([group_from_json(f) for f in obj["factors"]])
    if kind == "free_product":
        return FreeProductGroup([group_from_json(f) for f in obj["factors"]])
    if kind == "rewriting":
        return RewritingGroup(obj["generators"],
                              [tuple(r) for r in obj["rules"]])
    raise MalformedInputError(f"unknown group kind {kind!r}")


def group_to_json(group: Group) -> dict:
    if isinstance(group, FreeGroup):
        return {"kind": "free", "rank": group.rank,
                "names": [group.generators[1 + 2 * i].display for i in range(group.rank)]}
    if isinstance(group, FreeAbelianGroup):
        return {"kind": "free_abelian", "rank": group.rank,
                "names": [group.generators[1 + 2 * i].display for i in range(group.rank)]}
    if isinstance(group, BaumslagSolitarGroup):
        return {"kind": "bs", "n": group.n}
    if isinstance(group, FiniteGroup):
        return {"kind": "finite", "table": [list(r) for r in group.table],
                "names": [g.display for g in group.generators]}
    if isinstance(group, DirectProductGroup):
        return {"kind": "direct_product",
                "factors": [group_to_json(f) for f in group.factors]}
    if isinstance(group, FreeProductGroup):
        return {"kind": "free_product",
                "factors": [group_to_json(f) for f in group.factors]}
    if isinstance(group, RewritingGroup):
        return {"kind": "rewriting",
                "generators": [g.display for g in group.generators if not g.is_identity],
                "rules": [list(r) for r in group.user_rules]}
    raise MalformedInputError(f"cannot serialize group {group!r}")


# -- words, codings, patterns ----------------------------------------------


def word_to_json(group: Group, word) -> str:
    return group.format_word(word)


def element_to_json(group: Group, e: Element) -> str:
    return group.format_element(e)


def coding_from_json(group: Group, obj: Mapping[str, Any]) -> PatternCoding:
    alphabet = Alphabet(tuple(obj["alphabet"]))
    entries = []
    for w, label in obj["entries"]:
        entries.append((group.parse_word(w), alphabet.index(str(label))))
    return coding(alphabet, entries)


def coding_to_json(group: Group, c: PatternCoding) -> dict:
    return {"alphabet": list(c.alphabet.symbols),
            "entries": [[group.format_word(w), c.alphabet[s]]
                        for w, s in c.entries]}


def pattern_to_json(group: Group, p: Pattern, alphabet: Optional[Alphabet] = None) -> dict:
    out = []
    for e, s in p.sorted_items(group):
        label = alphabet[s] if alphabet is not None and isinstance(s, int) else s
        out.append([group.format_element(e) if group.length_of(e) else "",
                    label])
    return {"support": out}


def pattern_from_json(group: Group, obj: Mapping[str, Any],
                      alphabet: Alphabet) -> Pattern:
    assignment = {}
    for w, label in obj["support"]:
        assignment[group.element(group.parse_word(w))] = alphabet.index(str(label))
    return Pattern(assignment)


# -- subshifts ------------------------------------------------------------


def subshift_from_json(obj: Mapping[str, Any]) -> SubshiftSpec:
    group = group_from_json(obj["group"])
    forb = obj["forbidden"]
    kind = forb.get("kind")
    if kind == "finite":
        alphabet = Alphabet(tuple(obj["alphabet"]))
        patterns = tuple(pattern_from_json(group, p, alphabet)
                         for p in forb["patterns"])
        return SubshiftSpec(alphabet, group, FiniteFamily(patterns))
    if kind == "builtin":
        name = forb.get("name")
        if name == "one_or_less":
            return builtin_one_or_less(group, int(forb.get("k", 1)))
        if name == "mirror":
            return builtin_mirror(group)
        if name == "delone":
            return builtin_delone(group, int(forb["n"]))
        if name == "amenable_witness":
            return builtin_amenable_witness(group, int(forb["n_max"]))
        raise MalformedInputError(f"unknown builtin family {name!r}")
    raise MalformedInputError(f"unknown forbidden kind {kind!r}")


# -- machines ---------------------------------------------------------------


def machine_from_json(group: Group, obj: Mapping[str, Any]) -> GMachineSpec:
    states = tuple(obj["states"])
    state_index = {s: i for i, s in enumerate(states)}
    alphabet = Alphabet(tuple(obj["alphabet"]))
    blank = alphabet.index(obj["blank"])
    accepting = frozenset(state_index[s] for s in obj["accepting"])
    delta = {}
    for rule in obj["delta"]:
        key = (alphabet.index(rule["read"]), state_index[rule["state"]])
        move_word = group.parse_word(rule["move"]) if rule.get("move") else ()
        if len(move_word) > 1:
            raise MalformedInputError("machine moves must be single generators")
        move = move_word[0] if move_word else 0
        delta[key] = (alphabet.index(rule["write"]), state_index[rule["next"]], move)
    return GMachineSpec(group, states, accepting, alphabet, blank, delta)


def machine_to_json(machine: GMachineSpec) -> dict:
    group = machine.group
    alphabet = machine.tape_alphabet
    rules = []
    for (sym, q), (w, r, move) in sorted(machine.delta.items()):
        rules.append({"read": alphabet[sym], "state": machine.states[q],
                      "write": alphabet[w], "next": machine.states[r],
                      "move": group.generators[move].display if move else ""})
    return {"states": list(machine.states),
            "accepting": sorted(machine.states[q] for q in machine.accepting),
            "alphabet": list(alphabet.symbols), "blank": alphabet[machine.blank],
            "delta": rules}


# -- emitted constraint systems ---------------------------------------------


def component_alphabet_to_json(alphabet: ComponentAlphabet) -> list:
    return [[name, list(vals)] for name, vals in alphabet.components]


def constraint_to_json(group: Group, alphabet: ComponentAlphabet,
                       con: DominoConstraint) -> dict:
    support = []
    for off in con.support:
        if isinstance(off, GOffset):
            support.append({"g": group.format_element(off.g) if group.length_of(off.g) else "",
                            "dz": off.dz})
        else:
            support.append({"h": off.h})
    cells = []
    for req in con.cells:
        cell = {}
        for ci, allowed in req:
            name, vals = alphabet.components[ci]
            cell[name] = sorted(vals[v] for v in allowed)
        cells.append(cell)
    return {"tag": con.tag, "support": support, "cells": cells}


def instance_to_json(instance: DominoInstance) -> dict:
    group = instance.g_group
    out = {
        "group": group_to_json(group),
        "alphabet": component_alphabet_to_json(instance.alphabet),
        "forbidden": [constraint_to_json(group, instance.alphabet, c)
                      for c in instance.constraints],
        "origin_symbol": (instance.alphabet.format_symbol(tuple(instance.origin_symbol))
                          if instance.origin_symbol is not None else None),
    }
    if instance.h_group is not None:
        out["free_product_factor"] = group_to_json(instance.h_group)
    return out


def instance_from_json(obj: Mapping[str, Any]) -> DominoInstance:
    group = group_from_json(obj["group"])
    alphabet = ComponentAlphabet(tuple(
        (name, tuple(vals)) for name, vals in obj["alphabet"]))
    cons = []
    for c in obj["forbidden"]:
        support = []
        for off in c["support"]:
            if "h" in off:
                support.append(HOffset(int(off["h"])))
            else:
                support.append(GOffset(group.element(group.parse_word(off["g"])),
                                       int(off["dz"])))
        cells = []
        for cell in c["cells"]:
            req = []
            for name, labels in cell.items():
                ci = alphabet.index(name)
                req.append((ci, frozenset(alphabet.value_index(name, l)
                                          for l in labels)))
            cells.append(tuple(req))
        cons.append(DominoConstraint(tuple(support), tuple(cells), c["tag"]))
    origin = obj.get("origin_symbol")
    origin_symbol = None
    if origin is not None:
        labels = origin.strip("()").split(",")
        origin_symbol = tuple(alphabet.value_index(name, label)
                              for (name, _), label in zip(alphabet.components, labels))
    h_group = None
    if "free_product_factor" in obj:
        h_group = group_from_json(obj["free_product_factor"])
    return DominoInstance(group, alphabet, tuple(cons), origin_symbol, h_group)


# -- run manifests ------------------------------------------------------------


@dataclass
class RunManifest:
    command: list[str]
    inputs: dict[str, str] = field(default_factory=dict)
    parameters: dict[str, Any] = field(default_factory=dict)
    version: str = VERSION
    outcome: str = ""
    timestamp: float = 0.0

    def add_input(self, path: str) -> None:
        with open(path, "rb") as fh:
            self.inputs[path] = hashlib.sha256(fh.read()).hexdigest()

    def finish(self, outcome: str) -> dict:
        self.outcome = outcome
        self.timestamp = time.time()
        return self.to_json()

    def to_json(self) -> dict:
        return {"command": self.command, "inputs": self.inputs,
                "parameters": self.parameters, "version": self.version,
                "outcome": self.outcome, "timestamp": self.timestamp}

    def stable_json(self) -> dict:
        """The manifest minus its isolated timestamp field."""
        out = self.to_json()
        out.pop("timestamp")
        return out


def dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
