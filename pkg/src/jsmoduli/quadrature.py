"""
Graded Gauss-Jacobi quadrature of hyperelliptic integrands along straight
segments joining two branch points.

For ``y**2 = (x - a)(x - b) prod_c (x - c)`` the integral of
``y**power * weight(x) dx`` from ``a`` to ``b`` is computed with the endpoint
square-root singularities absorbed into Jacobi weights. The interval is cut
geometrically toward nearby branch points and poles so that the remaining
integrand is smooth on every piece.

The branch of ``y`` is fixed by ``sqrt((x - a)(x - b)) = i (b - a)
sqrt(s (1 - s))`` with ``x = a + s (b - a)``, and by continuing each
``sqrt(x - c)`` along the segment from its principal value at ``a``.

EXAMPLES::

    >>> import numpy as np
    >>> value = segment_integral(-1.0, 1.0, [], -1)
    >>> bool(abs(value - (-np.pi * 1j)) < 1e-13)
    True
"""

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

DEFAULT_ORDER = 24


@lru_cache(maxsize=None)
def _rule(order, alpha, beta):
    if alpha == 0 and beta == 0:
        return roots_legendre(order)
    return roots_jacobi(order, alpha, beta)


def _breakpoints(a, b, hazards):
    """Break points in ``[0, 1]`` accumulating geometrically toward the
    projections of hazards lying within a quarter length of the segment."""
    span = b - a
    points = {0.0, 1.0}
    for c in hazards:
        z = (c - a) / span
        foot = min(max(z.real, 0.0), 1.0)
        distance = max(abs(z - foot), 1e-14)
        if distance > 0.25:
            continue
        # a point much closer to an endpoint than the local scale would leave
        # the endpoint singularity just outside a long piece
        if min(foot, 1 - foot) > distance / 2:
            points.add(foot)
        radius = distance
        while radius < 1:
            for p in (foot - radius, foot + radius):
                if min(p, 1 - p) > radius / 2:
                    points.add(p)
            radius *= 2
    return sorted(points)


def _nodes(a, b, exponent, hazards, order):
    """Nodes ``s`` and weights including ``(s (1 - s))**exponent``."""
    breaks = _breakpoints(a, b, hazards)
    pieces = len(breaks) - 1
    nodes, weights = [], []
    for q in range(pieces):
        lo, hi = breaks[q], breaks[q + 1]
        half = (hi - lo) / 2
        first, last = q == 0, q == pieces - 1
        alpha = exponent if last else 0.0
        beta = exponent if first else 0.0
        n = order if pieces > 1 else max(order, 40)
        u, w = _rule(n, alpha, beta)
        s = lo + half * (1 + u)
        scaled = w * half * half ** (alpha + beta)
        if not first:
            scaled = scaled * s ** exponent
        if not last:
            scaled = scaled * (1 - s) ** exponent
        nodes.append(s)
        weights.append(scaled)
    return np.concatenate(nodes), np.concatenate(weights)


def continued_root_product(x, centers):
    """``prod_c sqrt(x - c)`` continued along the ordered sample ``x``."""
    total = np.ones_like(x, dtype=complex)
    for c in centers:
        z = x - c
        phase = np.unwrap(np.angle(z))
        total = total * np.sqrt(np.abs(z)) * np.exp(0.5j * phase)
    return total


def segment_integral(a, b, others, power, weight=None, poles=(), order=DEFAULT_ORDER):
    """
    Integral of ``y**power * weight(x) dx`` from ``a`` to ``b`` for
    ``power`` in ``(1, -1)``.

    ``others`` are the remaining branch points; ``poles`` are singularities
    of ``weight`` that the segment passes close to.
    """
    if power not in (1, -1):
        raise ValueError("power must be 1 or -1")
    if a == b:
        raise ZeroDivisionError("collided branch points")
    exponent = 0.5 * power
    s, w = _nodes(a, b, exponent, list(others) + list(poles), order)
    x = a + s * (b - a)
    g = continued_root_product(x, others)
    extra = weight(x) if weight is not None else 1.0
    if power == 1:
        return 1j * (b - a) ** 2 * np.sum(w * g * extra)
    return -1j * np.sum(w * extra / g)
