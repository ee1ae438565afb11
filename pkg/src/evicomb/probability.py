"""Point-probability readings of mass distributions.

A probability distribution over the frame satisfies a mass distribution when
Bel(A) <= P(A) <= Pls(A) for every subset A.  Besides the exhaustive checker
this module provides the uniform-allocation witness (every single constraint
set is satisfiable) and an exact decision procedure for whether two
constraint sets admit a common probability distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ._flow import FlowNetwork
from .errors import FrameMismatch, FrameTooLarge, WeightsDoNotSumToOne
from .frames import FocalSet, Frame, POWERSET_CAP
from .masses import MassDistribution, shared_denominator

#: Frames larger than this are refused by joint_satisfiable; the flow network
#: itself stays small, but the self-check sweep is exponential in frame size.
FEASIBILITY_CAP = 10


@dataclass(frozen=True)
class ProbabilityDistribution:
    """Exact point probabilities, one weight per frame label."""

    frame: Frame
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.weights) != self.frame.size:
            raise ValueError("one probability per frame label is required")
        for label, weight in zip(self.frame.labels, self.weights):
            if weight < 0:
                raise ValueError(f"probability of {label!r} is negative")
        if sum(self.weights) != 1:
            raise WeightsDoNotSumToOne(
                f"probabilities sum to {sum(self.weights)}, expected 1"
            )

    def prob(self, event: FocalSet) -> Fraction:
        """Exact probability of an event, the sum over its members."""
        if event.frame != self.frame:
            raise FrameMismatch("event is not over this distribution's frame")
        return sum(
            (w for i, w in enumerate(self.weights) if event.bits >> i & 1),
            Fraction(0),
        )

    def prob_of_label(self, label: str) -> Fraction:
        return self.weights[self.frame.index(label)]

    def to_json_dict(self) -> dict:
        return {
            "p": [
                {"label": label, "num": w.numerator, "den": w.denominator}
                for label, w in zip(self.frame.labels, self.weights)
            ]
        }

    @staticmethod
    def from_json_dict(data: Mapping, frame: Frame) -> "ProbabilityDistribution":
        """Parse the witness JSON format against a known frame.

        Labels absent from the list get probability zero; unknown or repeated
        labels are rejected.
        """
        try:
            items = [
                (str(item["label"]), Fraction(int(item["num"]), int(item["den"])))
                for item in data["p"]
            ]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed probability JSON: {exc}") from exc
        weights = [Fraction(0)] * frame.size
        seen: set[int] = set()
        for label, value in items:
            idx = frame.index(label)
            if idx in seen:
                raise ValueError(f"duplicate probability entry for label {label!r}")
            seen.add(idx)
            weights[idx] = value
        return ProbabilityDistribution(frame, tuple(weights))


def satisfies(
    p: ProbabilityDistribution,
    m: MassDistribution,
    *,
    max_frame_size: int = POWERSET_CAP,
) -> bool:
    """Exhaustively check Bel(A) <= P(A) <= Pls(A) over every subset A.

    Both inequalities are checked literally even though the upper bound is
    implied by the lower one on complements.  All comparisons run on integers
    after scaling to a common denominator.
    """
    if p.frame != m.frame:
        raise FrameMismatch("distributions are over different frames")
    n = p.frame.size
    if n > max_frame_size:
        raise FrameTooLarge(
            f"frame of size {n} exceeds the powerset sweep cap of {max_frame_size}"
        )
    scale = math.lcm(m.common_denominator, *(w.denominator for w in p.weights))
    point = [int(w * scale) for w in p.weights]
    focal = [(s.bits, int(w * scale)) for s, w in m.entries]
    prob = [0] * (1 << n)
    for a in range(1, 1 << n):
        low = a & -a
        prob[a] = prob[a ^ low] + point[low.bit_length() - 1]
    for a in range(1 << n):
        bel = sum(w for bits, w in focal if bits & ~a == 0)
        pls = sum(w for bits, w in focal if bits & a != 0)
        if not bel <= prob[a] <= pls:
            return False
    return True


def allocation_distribution(
    m: MassDistribution, *, max_frame_size: int = POWERSET_CAP
) -> ProbabilityDistribution:
    """Split every focal weight uniformly over its members.

    The result always satisfies ``m``: each subset receives at least the mass
    of the focal sets it contains and at most the mass of those it touches.
    """
    if m.frame.size > max_frame_size:
        raise FrameTooLarge(
            f"frame of size {m.frame.size} exceeds the powerset sweep cap of {max_frame_size}"
        )
    weights = [Fraction(0)] * m.frame.size
    for s, w in m.entries:
        share = w / len(s)
        for i in range(m.frame.size):
            if s.bits >> i & 1:
                weights[i] += share
    return ProbabilityDistribution(m.frame, tuple(weights))


def joint_satisfiable(
    m1: MassDistribution,
    m2: MassDistribution,
    *,
    max_frame_size: int = FEASIBILITY_CAP,
) -> ProbabilityDistribution | None:
    """Find a probability distribution satisfying both constraint sets, if any.

    Decided exactly by integer maximum flow after scaling both mass vectors
    to the common denominator L: source -> focal elements of ``m1`` (capacity
    = scaled weight) -> frame elements they contain -> focal elements of
    ``m2`` containing the element -> sink (capacity = scaled weight).  A flow
    of value L forces every source and sink edge to saturate, so the per-
    element throughput is an exact rational witness; by max-flow integrality
    no witness exists when the flow falls short.
    """
    if m1.frame != m2.frame:
        raise FrameMismatch("distributions are over different frames")
    frame = m1.frame
    if frame.size > max_frame_size:
        raise FrameTooLarge(
            f"frame of size {frame.size} exceeds the feasibility cap of {max_frame_size}"
        )
    scale = shared_denominator(m1, m2)
    net = FlowNetwork()
    source = net.add_node()
    sink = net.add_node()
    element_nodes = [net.add_node() for _ in range(frame.size)]
    element_edges: list[list[int]] = [[] for _ in range(frame.size)]
    for s, w in m1.entries:
        node = net.add_node()
        net.add_edge(source, node, int(w * scale))
        for i in range(frame.size):
            if s.bits >> i & 1:
                element_edges[i].append(net.add_edge(node, element_nodes[i], scale))
    for t, w in m2.entries:
        node = net.add_node()
        for i in range(frame.size):
            if t.bits >> i & 1:
                net.add_edge(element_nodes[i], node, scale)
        net.add_edge(node, sink, int(w * scale))
    if net.max_flow(source, sink) != scale:
        return None
    witness = ProbabilityDistribution(
        frame,
        tuple(
            Fraction(sum(net.flow_on(e) for e in edges), scale)
            for edges in element_edges
        ),
    )
    if not (satisfies(witness, m1) and satisfies(witness, m2)):
        raise RuntimeError("internal error: flow witness fails its own constraints")
    return witness
