"""Order-reversing duality between proximity and dissimilarity networks.

Flipping every relationship value v to 1 - v turns a proximity network
into a dissimilarity network and back, with the same epsilon: the
decompositions map onto each other term by term (term' = 1 - term),
order-decreasing becomes order-increasing, and the two slope bounds
exchange.  The flip is involutive and leaves every correspondence gap
|vx - vy| unchanged, so all distances between two networks equal the
distances between their duals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import DISSIMILARITY, GENERAL, PROXIMITY, HighOrderNetwork
from .distances import EXHAUSTIVE, order_distance, pnorm_distance


def dualize(net: HighOrderNetwork) -> HighOrderNetwork:
    """The dual network: values 1 - v, class flipped, same epsilon."""
    if net.kind == GENERAL:
        raise ValueError(
            "duality is defined for classed networks; tag the network as "
            "dissimilarity or proximity first"
        )
    flipped = PROXIMITY if net.kind == DISSIMILARITY else DISSIMILARITY
    values = {key: 1.0 - val for key, val in net.values.items()}
    return HighOrderNetwork(
        net.order, net.labels, values, kind=flipped, epsilon=net.epsilon
    )


@dataclass
class DualityCheck:
    """Distances on a proximity pair vs on their dissimilarity duals."""

    order_primal: list = field(default_factory=list)
    order_dual: list = field(default_factory=list)
    pnorm_primal: dict = field(default_factory=dict)
    pnorm_dual: dict = field(default_factory=dict)

    @property
    def max_discrepancy(self) -> float:
        gaps = [
            abs(a - b) for a, b in zip(self.order_primal, self.order_dual)
        ]
        gaps.extend(
            abs(self.pnorm_primal[p] - self.pnorm_dual[p])
            for p in self.pnorm_primal
        )
        return max(gaps) if gaps else 0.0


def check_duality_preservation(
    net_a, net_b, ps=(1.0,), solver=EXHAUSTIVE
) -> DualityCheck:
    """Compare every distance on a proximity pair with its dual pair.

    Computes the order-k distance for every shared order and the p-norm
    distance for each requested p, both between the inputs and between
    their duals; the flip preserves gaps exactly, so the discrepancies
    are pure solver roundoff (zero in exact arithmetic).
    """
    if net_a.kind != PROXIMITY or net_b.kind != PROXIMITY:
        raise ValueError("duality preservation check takes two proximity networks")
    dual_a, dual_b = dualize(net_a), dualize(net_b)
    check = DualityCheck()
    for k in range(min(net_a.order, net_b.order) + 1):
        check.order_primal.append(order_distance(net_a, net_b, k, solver).value)
        check.order_dual.append(order_distance(dual_a, dual_b, k, solver).value)
    if net_a.order == net_b.order:
        for p in ps:
            check.pnorm_primal[p] = pnorm_distance(net_a, net_b, p, solver).value
            check.pnorm_dual[p] = pnorm_distance(dual_a, dual_b, p, solver).value
    return check
