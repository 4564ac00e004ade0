"""Locating and tracking a single defect against a Markov background.

A defect is a maximal run of inadmissible transitions.  Tracking iterates
the rule, relocates the run, and keeps the core window trimmed to a margin
around it; the run's endpoints move at most one cell per step, so the
defect cannot escape the window.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .errors import MultipleDefectsError, NotAFunctionError
from .lattice import Configuration, apply_rule
from .rules import LocalRule
from .shifts import MarkovShift, Word


@dataclass(frozen=True)
class DefectInterval:
    """Maximal run [i..k] of inadmissible transitions; width w = k - i."""

    i: int
    k: int

    @property
    def w(self) -> int:
        return self.k - self.i


@dataclass(frozen=True)
class DefectRecord:
    """One tracked step: frame center z, raw extents, raw defect word.

    Conventions: L = ceil(w/2) - 1, R = floor(w/2), z = i + L + 1, and the
    word is the configuration restricted to [z-L, z+R] (empty when w = 0).
    """

    t: int
    z: int
    L: int
    R: int
    word: Word

    @property
    def width(self) -> int:
        return self.L + self.R + 1


@dataclass(frozen=True)
class Verdict:
    kind: str  # "particle" | "blight" | "vanished" | "split"
    width: Optional[int] = None
    t: Optional[int] = None

    @property
    def is_particle(self) -> bool:
        return self.kind == "particle"


@dataclass(frozen=True)
class DefectTrajectory:
    records: tuple[DefectRecord, ...]
    verdict: Verdict
    configs: Optional[tuple[Configuration, ...]] = None


def frame_of(interval: DefectInterval) -> tuple[int, int, int]:
    """(z, L, R) of the roughly-centered frame for a transition run."""
    w = interval.w
    L = (w + 1) // 2 - 1
    R = w // 2
    return interval.i + L + 1, L, R


def locate_defect(config: Configuration, shift: MarkovShift) -> Optional[DefectInterval]:
    """The unique maximal run of inadmissible transitions touching the core.

    Backgrounds are assumed admissible, so only transitions involving a core
    cell are scanned.  Raises :class:`MultipleDefectsError` when more than
    one separated run is present.
    """
    lo = config.origin - 1
    hi = max(config.end - 1, lo)
    bad = []
    prev = config.cell(lo)
    for j in range(lo, hi + 1):
        cur = config.cell(j + 1)
        if (prev, cur) not in shift.edges:
            bad.append(j)
        prev = cur
    if not bad:
        return None
    runs = []
    start = prev_j = bad[0]
    for j in bad[1:]:
        if j == prev_j + 1:
            prev_j = j
            continue
        runs.append((start, prev_j))
        start = prev_j = j
    runs.append((start, prev_j))
    if len(runs) > 1:
        raise MultipleDefectsError(f"{len(runs)} separated defects at {runs}")
    return DefectInterval(*runs[0])


def record_at(config: Configuration, interval: DefectInterval, t: int) -> DefectRecord:
    z, L, R = frame_of(interval)
    return DefectRecord(t, z, L, R, config.window(z - L, z + R + 1))


def track(rule: LocalRule, shift: MarkovShift, config: Configuration, T: int,
          width_cap: int = 64, keep_configs: bool = False) -> DefectTrajectory:
    """Track a single defect for T steps.

    Verdicts: ``particle`` if the width never exceeds ``width_cap`` through
    step T (the cap is a judgment, not a proof of boundedness), ``blight``
    when the cap is exceeded, ``vanished`` when the configuration becomes
    fully admissible, ``split`` when separate runs appear.
    """
    margin = 2 * rule.radius + 2
    records: list[DefectRecord] = []
    configs: list[Configuration] = []
    cur = config
    for t in range(T + 1):
        try:
            interval = locate_defect(cur, shift)
        except MultipleDefectsError:
            return DefectTrajectory(tuple(records), Verdict("split", t=t),
                                    tuple(configs) if keep_configs else None)
        if interval is None:
            return DefectTrajectory(tuple(records), Verdict("vanished", t=t),
                                    tuple(configs) if keep_configs else None)
        if interval.w > width_cap:
            return DefectTrajectory(tuple(records), Verdict("blight", t=t),
                                    tuple(configs) if keep_configs else None)
        rec = record_at(cur, interval, t)
        records.append(rec)
        if keep_configs:
            configs.append(cur)
        if t == T:
            break
        cur = apply_rule(rule, cur)
        cur = cur.with_window(rec.z - rec.L - margin, rec.z + rec.R + 1 + margin)
    W = max(r.width for r in records)
    return DefectTrajectory(tuple(records), Verdict("particle", width=W),
                            tuple(configs) if keep_configs else None)


def pad_to_constant_width(record: DefectRecord, config: Configuration,
                          L: int, R: int) -> DefectRecord:
    """Extend the raw defect word with adjacent admissible symbols; z fixed."""
    if L < record.L or R < record.R:
        raise ValueError("cannot pad to a smaller frame")
    return replace(record, L=L, R=R,
                   word=config.window(record.z - L, record.z + R + 1))


def check_velocity_bounds(traj: DefectTrajectory) -> list[str]:
    """Violations of the one-step displacement bounds, empty when all hold.

    (a) edges advance at most one cell: z0-L0-1 <= z1-L1 and
        z1+R1 <= z0+R0+1;
    (b) z0-L0-2 <= z1 <= z0+R0+1.
    """
    bad = []
    for a, b in zip(traj.records, traj.records[1:]):
        if not (a.z - a.L - 1 <= b.z - b.L and b.z + b.R <= a.z + a.R + 1):
            bad.append(f"(a) violated at t={a.t}: {a} -> {b}")
        if not (a.z - a.L - 2 <= b.z <= a.z + a.R + 1):
            bad.append(f"(b) violated at t={a.t}: {a} -> {b}")
    return bad


@dataclass(frozen=True)
class DefectAutomaton:
    """Empirical finite-automaton model of a constant-width defect.

    Inputs are (left word of length L+2, state word of length W, right word
    of length R+1); ``upsilon`` gives the next state word, ``velocity`` the
    displacement.  Tables cover reached inputs only.
    """

    W: int
    L: int
    R: int
    upsilon: dict
    velocity: dict

    def inputs(self):
        return sorted(self.upsilon)


def automaton_key(config: Configuration, z: int, L: int, R: int):
    lw = config.window(z - L - (L + 2), z - L)
    d = config.window(z - L, z + R + 1)
    rw = config.window(z + R + 1, z + 2 * R + 2)
    return lw, d, rw


def extract_automaton(rule: LocalRule, shift: MarkovShift,
                      seeds: Sequence[Configuration], T: int,
                      width_cap: int = 64) -> DefectAutomaton:
    """Enumerate (left, state, right) -> (state', velocity) from tracked seeds.

    All seeds must track as particles; the common frame (L, R) is the
    componentwise maximum over every record.  Seeing two outputs for one
    input raises :class:`NotAFunctionError` (width cap too small).
    """
    trajs = []
    for seed in seeds:
        traj = track(rule, shift, seed, T, width_cap=width_cap, keep_configs=True)
        if not traj.verdict.is_particle:
            raise ValueError(f"seed did not track as a particle: {traj.verdict}")
        trajs.append(traj)
    L = max(r.L for traj in trajs for r in traj.records)
    R = max(r.R for traj in trajs for r in traj.records)
    W = L + R + 1
    upsilon: dict = {}
    velocity: dict = {}
    for traj in trajs:
        for (a, b), cfg_a, cfg_b in zip(zip(traj.records, traj.records[1:]),
                                        traj.configs, traj.configs[1:]):
            key = automaton_key(cfg_a, a.z, L, R)
            d_next = cfg_b.window(b.z - L, b.z + R + 1)
            v = b.z - a.z
            if not (-L - 2 <= v <= R + 1):
                raise NotAFunctionError(f"velocity {v} outside [-L-2, R+1]")
            out = (d_next, v)
            seen = upsilon.get(key)
            if seen is not None and (seen, velocity[key]) != out:
                raise NotAFunctionError(
                    f"input {key} maps to both {(seen, velocity[key])} and {out}")
            upsilon[key] = d_next
            velocity[key] = v
    return DefectAutomaton(W, L, R, upsilon, velocity)
