"""Contextualization-cue search and interpretation assembly.

A deficient pair (two concepts with no direct assertion) can be correlated
through a cue: a third concept adjacent to both. Each cue attachment brings
two bonds; attachments for one interpretation are chosen to minimize total
configuration energy, at most k cues per deficient pair.

Because a cue shared by two pairs also shares a bond (bonds are a set, each
counted once), per-pair ranking alone is not always the energy minimizer.
Selection therefore groups interacting attachments into components and solves
each component exactly when small, falling back to a deterministic
marginal-gain greedy above `component_budget`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

from abductive_qa.kb import Assertion, SemanticNetwork
from abductive_qa.pattern import (
    Bond,
    Configuration,
    Generator,
    Grounding,
    Level,
    bond_energy,
    make_bond,
    make_configuration,
)


class DegenerateInput(ValueError):
    """Evidence or hypothesis grounded to zero concepts."""


class TooLarge(ValueError):
    """Brute-force search space exceeds its guard."""


@dataclass(frozen=True)
class CueCandidate:
    """One admissible cue for a deficient pair, with its two bonds."""

    cue: int
    left: Assertion  # strongest edge between g_i and the cue
    right: Assertion  # strongest edge between the cue and g_j
    gain: float  # tanh(phi_left) + tanh(phi_right)


@dataclass(frozen=True)
class InterpretationParams:
    k: int = 3
    contextualize: bool = True
    include_direct: bool = True
    include_evidence_evidence: bool = False
    # Per-pair candidate cap fed to the selector; never binds at small scale.
    candidate_cap: Optional[int] = None
    # Max enumeration size per interacting component before greedy fallback.
    component_budget: int = 20000

    def effective_cap(self) -> Optional[int]:
        if self.candidate_cap is not None:
            return self.candidate_cap
        return max(self.k + 8, 16)


def find_cues(
    network: SemanticNetwork, g_i: int, g_j: int, k: Optional[int] = None
) -> list[CueCandidate]:
    """One-hop intermediates adjacent to both concepts, best gain first.

    Applies only to deficient pairs: raises ValueError when g_i and g_j are
    equal or directly related. Ties in gain break on ascending cue id; the
    list is truncated to k when given.
    """
    if g_i == g_j:
        raise ValueError("cue search requires two distinct concepts")
    if network.phi(g_i, g_j) is not None:
        raise ValueError("cue search applies only to pairs with no direct relation")
    return _cue_candidates(network, g_i, g_j, k)


def _cue_candidates(
    network: SemanticNetwork, g_i: int, g_j: int, k: Optional[int]
) -> list[CueCandidate]:
    left_edges = network.best_edges(g_i)
    right_edges = network.best_edges(g_j)
    shared = (set(left_edges) & set(right_edges)) - {g_i, g_j}
    candidates = []
    for cue in shared:
        left = left_edges[cue]
        right = right_edges[cue]
        gain = bond_energy(left.weight) + bond_energy(right.weight)
        candidates.append(CueCandidate(cue, left, right, gain))
    candidates.sort(key=lambda c: (-c.gain, c.cue))
    if k is not None:
        candidates = candidates[:k]
    return candidates


# -- interpretation assembly ---------------------------------------------

_GenKey = tuple[int, Level]
_BondKey = tuple[_GenKey, _GenKey, str]


class _BondSpec(NamedTuple):
    key: _BondKey
    relation: str
    phi: float
    value: float  # tanh(phi)


class _Attachment(NamedTuple):
    pair: int
    cue: int
    bonds: tuple[_BondSpec, ...]
    gain: float


def _directed_spec(assertion: Assertion, key_of: dict[int, _GenKey]) -> _BondSpec:
    from_key = key_of[assertion.start]
    to_key = key_of[assertion.end]
    return _BondSpec(
        (from_key, to_key, assertion.relation),
        assertion.relation,
        assertion.weight,
        bond_energy(assertion.weight),
    )


def _dedup(ids: Iterable[int]) -> list[int]:
    seen = set()
    out = []
    for i in ids:
        if i not in seen:
            seen.add(i)
            out.append(i)
    return out


class _Problem(NamedTuple):
    """Everything selection needs: fixed bonds plus per-pair cue candidates."""

    evidence: list[int]
    hypothesis: list[int]
    direct_specs: list[_BondSpec]
    pairs: list[tuple[int, int]]  # deficient (concept, concept) pairs
    attachments: list[_Attachment]


def _build_problem(
    network: SemanticNetwork,
    evidence: Sequence[int],
    hypothesis: Sequence[int],
    params: InterpretationParams,
    cap: Optional[int],
) -> _Problem:
    evidence = _dedup(evidence)
    hypothesis = _dedup(hypothesis)
    if not evidence or not hypothesis:
        raise DegenerateInput("evidence and hypothesis must each ground a concept")
    for concept in itertools.chain(evidence, hypothesis):
        network.concept_uri(concept)  # raises UnknownConcept

    ev_key = {c: (c, Level.EVIDENCE) for c in evidence}
    hyp_key = {c: (c, Level.HYPOTHESIS) for c in hypothesis}

    direct_specs: list[_BondSpec] = []
    deficient: list[tuple[int, int, dict[int, _GenKey]]] = []

    for e in evidence:
        for h in hypothesis:
            if e == h:
                continue  # identity needs no assertion; never cue-augmented
            a = network.phi(e, h)
            if a is not None:
                if params.include_direct:
                    # POSET order: evidence-level generators bond downward
                    # into the hypothesis level.
                    direct_specs.append(
                        _BondSpec(
                            (ev_key[e], hyp_key[h], a.relation),
                            a.relation,
                            a.weight,
                            bond_energy(a.weight),
                        )
                    )
            else:
                deficient.append((e, h, {e: ev_key[e], h: hyp_key[h]}))

    if params.include_evidence_evidence:
        for e1, e2 in itertools.combinations(evidence, 2):
            a = network.phi(e1, e2)
            if a is not None:
                if params.include_direct:
                    direct_specs.append(_directed_spec(a, ev_key))
            else:
                deficient.append((e1, e2, {e1: ev_key[e1], e2: ev_key[e2]}))

    attachments: list[_Attachment] = []
    pairs: list[tuple[int, int]] = []
    if params.contextualize and params.k > 0:
        for g_i, g_j, endpoint_keys in deficient:
            cands = [
                c for c in _cue_candidates(network, g_i, g_j, cap) if c.gain > 0
            ]
            if not cands:
                continue
            pair_idx = len(pairs)
            pairs.append((g_i, g_j))
            for cand in cands:
                key_of = dict(endpoint_keys)
                key_of[cand.cue] = (cand.cue, Level.CUE)
                specs = (
                    _directed_spec(cand.left, key_of),
                    _directed_spec(cand.right, key_of),
                )
                attachments.append(
                    _Attachment(pair_idx, cand.cue, specs, cand.gain)
                )

    return _Problem(evidence, hypothesis, direct_specs, pairs, attachments)


def _assemble(
    network: SemanticNetwork,
    problem: _Problem,
    selected: Iterable[_Attachment],
    degenerate: bool = False,
) -> Configuration:
    cue_ids = sorted({att.cue for att in selected})
    generators: list[Generator] = []
    index_of: dict[_GenKey, int] = {}
    for c in problem.evidence:
        index_of[(c, Level.EVIDENCE)] = len(generators)
        generators.append(
            Generator(c, network.concept_uri(c), Grounding.GROUNDED, Level.EVIDENCE)
        )
    for c in problem.hypothesis:
        index_of[(c, Level.HYPOTHESIS)] = len(generators)
        generators.append(
            Generator(c, network.concept_uri(c), Grounding.GROUNDED, Level.HYPOTHESIS)
        )
    for c in cue_ids:
        index_of[(c, Level.CUE)] = len(generators)
        generators.append(
            Generator(c, network.concept_uri(c), Grounding.UNGROUNDED, Level.CUE)
        )

    direct: dict[tuple[int, int, str], Bond] = {}
    for spec in problem.direct_specs:
        bond = make_bond(index_of[spec.key[0]], index_of[spec.key[1]], spec.relation, spec.phi)
        direct.setdefault(bond.key(), bond)
    cue_bonds: dict[tuple[int, int, str], Bond] = {}
    for att in selected:
        for spec in att.bonds:
            bond = make_bond(
                index_of[spec.key[0]], index_of[spec.key[1]], spec.relation, spec.phi
            )
            if bond.key() not in direct:
                cue_bonds.setdefault(bond.key(), bond)
    ordered = list(direct.values()) + sorted(
        cue_bonds.values(), key=lambda b: (b.from_idx, b.to_idx, b.relation)
    )
    return make_configuration(generators, ordered, degenerate=degenerate)


# -- selection ------------------------------------------------------------


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _components(attachments: list[_Attachment]) -> list[list[int]]:
    dsu = _DSU(len(attachments))
    by_pair: dict[int, int] = {}
    by_bond: dict[_BondKey, int] = {}
    for i, att in enumerate(attachments):
        if att.pair in by_pair:
            dsu.union(by_pair[att.pair], i)
        else:
            by_pair[att.pair] = i
        for spec in att.bonds:
            if spec.key in by_bond:
                dsu.union(by_bond[spec.key], i)
            else:
                by_bond[spec.key] = i
    groups: dict[int, list[int]] = {}
    for i in range(len(attachments)):
        groups.setdefault(dsu.find(i), []).append(i)
    return [sorted(g) for g in sorted(groups.values())]


def _union_value(combo: Iterable[_Attachment]) -> float:
    seen: set[_BondKey] = set()
    value = 0.0
    for att in combo:
        for spec in att.bonds:
            if spec.key not in seen:
                seen.add(spec.key)
                value += spec.value
    return value


def _pair_subsets(indices: list[int], k: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for size in range(0, min(k, len(indices)) + 1):
        out.extend(itertools.combinations(indices, size))
    return out


def _solve_component(
    attachments: list[_Attachment], members: list[int], k: int, budget: int
) -> list[int]:
    """Pick attachments (<= k per pair) maximizing the deduplicated bond sum."""
    pair_members: dict[int, list[int]] = {}
    for i in members:
        pair_members.setdefault(attachments[i].pair, []).append(i)
    pair_lists = [sorted(v) for _, v in sorted(pair_members.items())]

    if len(pair_lists) == 1:
        # No bond sharing within one pair: top-k by gain is exact.
        ranked = sorted(
            pair_lists[0], key=lambda i: (-attachments[i].gain, attachments[i].cue)
        )
        return sorted(ranked[:k])

    subset_lists = [_pair_subsets(lst, k) for lst in pair_lists]
    cost = math.prod(len(s) for s in subset_lists)
    if cost <= budget:
        best_val = -math.inf
        best: tuple[int, ...] = ()
        for combo in itertools.product(*subset_lists):
            chosen = tuple(itertools.chain.from_iterable(combo))
            val = _union_value(attachments[i] for i in chosen)
            if val > best_val + 1e-15:
                best_val = val
                best = chosen
        return sorted(best)

    # Fallback: deterministic marginal-gain greedy.
    selected: list[int] = []
    chosen_keys: set[_BondKey] = set()
    remaining = {p: k for p in pair_members}
    available = set(members)
    while True:
        best_i = None
        best_marginal = 0.0
        for i in sorted(available):
            att = attachments[i]
            if remaining[att.pair] == 0:
                continue
            marginal = sum(s.value for s in att.bonds if s.key not in chosen_keys)
            if marginal > best_marginal + 1e-15:
                best_marginal = marginal
                best_i = i
        if best_i is None:
            break
        att = attachments[best_i]
        selected.append(best_i)
        available.discard(best_i)
        remaining[att.pair] -= 1
        chosen_keys.update(s.key for s in att.bonds)
    return sorted(selected)


def build_interpretation(
    network: SemanticNetwork,
    evidence: Sequence[int],
    hypothesis: Sequence[int],
    params: InterpretationParams = InterpretationParams(),
) -> Configuration:
    """Assemble the minimum-energy contextualized interpretation.

    Direct assertions between evidence and hypothesis concepts become
    grounded bonds; every deficient pair is augmented with up to k
    positive-gain cues, chosen so the resulting configuration is the energy
    minimizer within that family.
    """
    problem = _build_problem(
        network, evidence, hypothesis, params, params.effective_cap()
    )
    selected: list[_Attachment] = []
    for members in _components(problem.attachments):
        for i in _solve_component(
            problem.attachments, members, params.k, params.component_budget
        ):
            selected.append(problem.attachments[i])
    return _assemble(network, problem, selected)


def brute_force_best_interpretation(
    network: SemanticNetwork,
    evidence: Sequence[int],
    hypothesis: Sequence[int],
    params: InterpretationParams = InterpretationParams(),
    max_candidates: int = 20,
) -> Configuration:
    """Test oracle: exhaustively enumerate admissible cue subsets.

    Every combination of at most k positive-gain cues per deficient pair is
    scored; the minimum-energy configuration wins. Guarded by TooLarge; only
    suitable for small synthetic networks.
    """
    problem = _build_problem(network, evidence, hypothesis, params, cap=None)
    if len(problem.attachments) > max_candidates:
        raise TooLarge(
            f"{len(problem.attachments)} candidate cues exceed the oracle guard"
        )
    pair_members: dict[int, list[int]] = {}
    for i, att in enumerate(problem.attachments):
        pair_members.setdefault(att.pair, []).append(i)
    subset_lists = [
        _pair_subsets(sorted(v), params.k) for _, v in sorted(pair_members.items())
    ]
    cost = math.prod(len(s) for s in subset_lists) if subset_lists else 1
    if cost > 500_000:
        raise TooLarge(f"{cost} cue combinations exceed the oracle guard")

    direct_value = sum(s.value for s in problem.direct_specs)
    best_energy = math.inf
    best_combo: tuple[int, ...] = ()
    for combo in itertools.product(*subset_lists):
        chosen = tuple(itertools.chain.from_iterable(combo))
        value = _union_value(problem.attachments[i] for i in chosen)
        energy = -(value + direct_value)
        if energy < best_energy - 1e-15:
            best_energy = energy
            best_combo = chosen
    return _assemble(
        network, problem, [problem.attachments[i] for i in best_combo]
    )
