"""Decoding chains, skip policies, and the chain-counting lower bound.

A decoding choice ``D`` picks, for every present receiver ``H``, one new
message ``D(H)`` outside ``H``.  A realisation grows a chain ``C`` from
the empty set: at a present prefix the next element is forced to
``D(C)``; at an absent prefix a policy either *skips* (adds any message
outside ``C``, recorded in the skipped set ``S``) or *mimics* a present
strict subset ``B`` of ``C`` with ``D(B)`` outside ``C``.  Mimicking is
only legal when such a ``B`` exists; otherwise a skip is forced.

Minimizing ``|S|`` over realisations is a dynamic program over the
2^m prefix sets (the future depends only on the set, not the order).
``l_star`` maximizes that minimum over every decoding choice; the
broadcast rate is at least ``m - l_star``.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import bitset
from ._kernels import lstar_scan, skip_costs
from .errors import BudgetExceeded, PolicyViolation
from .instance import PicInstance

DEFAULT_BUDGET = 100_000_000


@dataclass(frozen=True)
class DecodingChoice:
    """Total map from present receiver masks to 1-based chosen messages."""

    assignment: tuple[tuple[int, int], ...]

    @cached_property
    def as_dict(self) -> dict[int, int]:
        return dict(self.assignment)

    def message_for(self, mask: int) -> int:
        return self.as_dict[mask]


def decoding_choice(
    inst: PicInstance,
    overrides: Mapping[Iterable[int], int] | None = None,
    fill: str | None = "least",
) -> DecodingChoice:
    """Build a decoding choice, completing unspecified receivers.

    ``overrides`` maps side-information index collections to chosen
    messages; with ``fill="least"`` every other present receiver gets
    the smallest message outside its side information.
    """
    chosen: dict[int, int] = {}
    if overrides:
        for key, msg in overrides.items():
            mask = bitset.mask_of(key, inst.m)
            if not inst.is_present(mask):
                raise ValueError(
                    f"{sorted(frozenset(key))} is not a present receiver"
                )
            if not 1 <= msg <= inst.m or mask >> (msg - 1) & 1:
                raise ValueError(
                    f"message {msg} is not a valid choice for {sorted(frozenset(key))}"
                )
            chosen[mask] = msg
    assignment = []
    for mask in inst.present:
        if mask in chosen:
            assignment.append((mask, chosen[mask]))
        elif fill == "least":
            assignment.append((mask, bitset.least_outside(mask, inst.m)))
        else:
            raise ValueError(
                f"no choice given for present receiver {list(bitset.indices_of(mask))}"
            )
    return DecodingChoice(tuple(assignment))


@dataclass(frozen=True)
class Realisation:
    """One run of the chain process: the chain order and the skipped set."""

    chain: tuple[int, ...]
    skipped: int

    @property
    def skipped_indices(self) -> tuple[int, ...]:
        return bitset.indices_of(self.skipped)


@dataclass(frozen=True)
class Skip:
    """Policy decision: add ``message`` to the chain and the skipped set."""

    message: int


@dataclass(frozen=True)
class Mimic:
    """Policy decision: extend with ``D(B)`` for present witness ``B``."""

    receiver: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "receiver", frozenset(self.receiver))


@dataclass(frozen=True)
class ChainState:
    """What a policy sees at an absent prefix."""

    inst: PicInstance
    choice: DecodingChoice
    chain: tuple[int, ...]
    mask: int
    witnesses: tuple[int, ...]

    @property
    def prefix(self) -> frozenset[int]:
        return frozenset(self.chain)


SkipPolicy = Callable[[ChainState], Skip | Mimic]


def mimic_witnesses(
    inst: PicInstance, choice: DecodingChoice, mask: int
) -> tuple[int, ...]:
    """Present strict subsets ``B`` of ``mask`` with ``D(B)`` outside it."""
    dmap = choice.as_dict
    found = []
    for sub in bitset.iter_strict_submasks(mask):
        if inst.is_present(sub) and not mask >> (dmap[sub] - 1) & 1:
            found.append(sub)
    return bitset.sort_canonical(found)


def run_realisation(
    inst: PicInstance, choice: DecodingChoice, policy: SkipPolicy
) -> Realisation:
    """Execute the chain process, consulting ``policy`` at absent prefixes."""
    mask = 0
    chain: list[int] = []
    skipped = 0
    while mask != inst.full:
        if inst.is_present(mask):
            a = choice.message_for(mask)
        else:
            witnesses = mimic_witnesses(inst, choice, mask)
            decision = policy(ChainState(inst, choice, tuple(chain), mask, witnesses))
            if isinstance(decision, Mimic):
                b = bitset.mask_of(decision.receiver, inst.m)
                if b not in witnesses:
                    raise PolicyViolation(
                        f"{sorted(decision.receiver)} is not a mimic witness at "
                        f"prefix {sorted(chain)}"
                    )
                a = choice.message_for(b)
            elif isinstance(decision, Skip):
                a = decision.message
                if not 1 <= a <= inst.m or mask >> (a - 1) & 1:
                    raise PolicyViolation(
                        f"cannot skip {a} at prefix {sorted(chain)}"
                    )
                skipped |= 1 << (a - 1)
            else:
                raise PolicyViolation(f"unknown decision {decision!r}")
        mask |= 1 << (a - 1)
        chain.append(a)
    return Realisation(tuple(chain), skipped)


# --- policies ---


def scripted_policy(
    script: Mapping[Iterable[int], Skip | Mimic],
    default: SkipPolicy | None = None,
) -> SkipPolicy:
    """Replay fixed decisions keyed by the prefix set."""
    table = {frozenset(k): v for k, v in script.items()}

    def policy(state: ChainState) -> Skip | Mimic:
        key = state.prefix
        if key in table:
            return table[key]
        if default is not None:
            return default(state)
        raise PolicyViolation(f"no scripted decision at prefix {sorted(key)}")

    return policy


def skip_least_policy(state: ChainState) -> Skip:
    """Always skip the smallest message outside the chain."""
    return Skip(bitset.least_outside(state.mask, state.inst.m))


def avoid_skip_policy(state: ChainState) -> Skip | Mimic:
    """Mimic the canonically first witness whenever one exists."""
    if state.witnesses:
        return Mimic(frozenset(bitset.indices_of(state.witnesses[0])))
    return skip_least_policy(state)


def optimal_policy(inst: PicInstance, choice: DecodingChoice) -> SkipPolicy:
    """A policy achieving exactly ``min_skips(inst, choice)`` skips.

    Reads the skip-count table; prefers mimicking when it is optimal.
    """
    cost = _cost_table(inst, choice, maximize=False)
    dmap = choice.as_dict

    def policy(state: ChainState) -> Skip | Mimic:
        c = state.mask
        target = cost[c]
        for b in state.witnesses:
            if cost[c | (1 << (dmap[b] - 1))] == target:
                return Mimic(frozenset(bitset.indices_of(b)))
        for a in range(1, inst.m + 1):
            bit = 1 << (a - 1)
            if c & bit == 0 and cost[c | bit] + 1 == target:
                return Skip(a)
        raise PolicyViolation("skip-count table inconsistent with state")

    return policy


# --- skip-count dynamic programs ---


def _present_flags(inst: PicInstance) -> np.ndarray:
    flags = np.ones(1 << inst.m, np.uint8)
    flags[inst.full] = 0
    for h in inst.absent:
        flags[h] = 0
    return flags


def _choice_table(inst: PicInstance, choice: DecodingChoice) -> np.ndarray:
    dtab = np.zeros(1 << inst.m, np.int64)
    for mask, msg in choice.assignment:
        dtab[mask] = msg - 1
    return dtab


def _cost_table(
    inst: PicInstance, choice: DecodingChoice, maximize: bool
) -> np.ndarray:
    cost = np.zeros(1 << inst.m, np.int64)
    skip_costs(
        inst.m, _present_flags(inst), _choice_table(inst, choice), maximize, cost
    )
    return cost


def min_skips(inst: PicInstance, choice: DecodingChoice) -> int:
    """Fewest skips over all realisations under ``choice``."""
    return int(_cost_table(inst, choice, maximize=False)[0])


def max_skips(inst: PicInstance, choice: DecodingChoice) -> int:
    """Most skips over all realisations under ``choice``."""
    return int(_cost_table(inst, choice, maximize=True)[0])


@dataclass(frozen=True)
class LStarResult:
    value: int
    witness: DecodingChoice
    choices: int
    evaluations: int


def l_star(inst: PicInstance, budget: int = DEFAULT_BUDGET) -> LStarResult:
    """Maximize ``min_skips`` over every decoding choice exhaustively.

    The witness is the lexicographically least maximizer in the
    canonical receiver order.  Refuses when the enumeration would
    exceed ``budget`` state evaluations (choices times 2^m states).
    """
    pres = inst.present
    allowed = [
        [a for a in range(inst.m) if not mask >> a & 1] for mask in pres
    ]
    choices = 1
    for opts in allowed:
        choices *= len(opts)
    evaluations = choices * (1 << inst.m)
    if evaluations > budget:
        raise BudgetExceeded(evaluations, budget, "decoding-choice enumeration")
    pres_masks = np.array(pres, np.int64).reshape(len(pres))
    nchoices = np.array([len(opts) for opts in allowed], np.int64).reshape(len(pres))
    choice_flat = np.array(
        [a for opts in allowed for a in opts], np.int64
    ).reshape(sum(len(opts) for opts in allowed))
    choice_off = np.zeros(len(pres) + 1, np.int64)
    np.cumsum(nchoices, out=choice_off[1:])
    dtab = np.zeros(1 << inst.m, np.int64)
    cost = np.zeros(1 << inst.m, np.int64)
    witness = np.zeros(len(pres), np.int64)
    value = int(
        lstar_scan(
            inst.m,
            pres_masks,
            nchoices,
            choice_flat,
            choice_off,
            _present_flags(inst),
            dtab,
            cost,
            witness,
        )
    )
    assignment = tuple(
        (int(mask), int(witness[i]) + 1) for i, mask in enumerate(pres)
    )
    return LStarResult(value, DecodingChoice(assignment), choices, evaluations)


def chain_lower_bound(inst: PicInstance, budget: int = DEFAULT_BUDGET) -> int:
    """``m - l_star``: no broadcast code can be shorter."""
    return inst.m - l_star(inst, budget).value
