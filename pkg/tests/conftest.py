import functools
from pathlib import Path

import pytest

from hardmap.census import admissible_classes

GOLDEN = Path(__file__).parent / "golden"

THETA = "+w(++)"
# 14 vertices once closed: 21 edges and 9 faces
CHAIN13 = "+w(+k(-w(+k(-w(+k(-w(+k(-w(+k(-w(+k(-w(++)))))))))))))"

# 8-vertex admissible map with two NHP edges: its class holds an empty-NHP tree
# (reached by the unmarked cutting) and a one-NHP tree, plus an r = 1 tree.
CLASS8_PLAIN = "+w(+K(-w(K(-w(k(W(++)-)+))+)))"
CLASS8_ONE = "+w(+K(-w(K(W(+k(--))w(++))+)))"
CLASS8_R1 = "+w(+K(W(k(--)K(w(++)-))w(++)))"

# 12-vertex admissible map with two NHP edges whose class holds a one-NHP and a
# two-NHP tree; the unmarked cutting gives a non-admissible r = 1 tree.
CLASS12_ONE = "+w(+K(W(k(--)k(-w(+K(w(++)-))))w(k(W(++)-)+)))"
CLASS12_TWO = "+w(+K(W(k(--)k(-w(+K(w(++)W(+k(--))))))w(++)))"
CLASS12_R1 = "+w(+K(-w(k(W(K(-w(k(W(k(-w(++))+)-)+))+)-)+)))"

# HP and regular everywhere, yet closing it joins two occupied vertices
NOT_GOOD6 = "+w(+K(-w(k(-W(++))+)))"


@functools.lru_cache(maxsize=None)
def classes(n_inner):
    return admissible_classes(n_inner)


@pytest.fixture(scope="session")
def small_classes():
    """Admissible classes keyed by vertex count, up to 8 vertices."""
    return {n + 1: classes(n) for n in (1, 3, 5, 7)}
