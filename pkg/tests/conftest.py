import pytest
from hypothesis import assume
from hypothesis import strategies as st

from jsmoduli import boutroux
from jsmoduli.ribbon import RibbonGraph, validate

LOOP_STEPS = 600


@pytest.fixture(scope="session")
def loops():
    """Certified loops of both local models at a moderate resolution."""
    return {model: boutroux.continue_loop(model, 2.0, steps=LOOP_STEPS)
            for model in ("pentagon", "dehn")}


@st.composite
def ribbon_graphs(draw, max_edges=6, odd_valences=False):
    """Connected ribbon graphs from a random rotation and pairing."""
    edges = draw(st.integers(1, max_edges))
    n = 2 * edges
    darts = draw(st.permutations(range(n)))
    pairs = tuple((darts[2 * k], darts[2 * k + 1]) for k in range(edges))
    order = draw(st.permutations(range(n)))
    if odd_valences:
        sizes, remaining = [], n
        while remaining:
            options = sorted({k for k in (1, 3, 5) if k <= remaining} | {remaining % 2 and remaining})
            size = draw(st.sampled_from([k for k in options if k]))
            sizes.append(size)
            remaining -= size
        bounds = [sum(sizes[:k]) for k in range(len(sizes) + 1)]
    else:
        cuts = sorted(draw(st.sets(st.integers(1, n - 1), max_size=n - 1)))
        bounds = [0] + cuts + [n]
    cycles = tuple(tuple(order[a:b]) for a, b in zip(bounds, bounds[1:]))
    graph = RibbonGraph(n, cycles, pairs)
    assume(validate(graph).valid)
    return graph

