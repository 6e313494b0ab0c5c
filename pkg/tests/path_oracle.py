"""Brute-force path enumerator: the independent oracle for algebra dimensions.

Only valid for monomial presentations.  A path of the quiver survives iff it
contains no relation word as a contiguous subword; the algebra dimension is
the number of surviving paths (trivial paths included) and the Loewy length
is one more than the longest surviving path.

Deliberately ignorant of qalg internals: plain breadth-first search on
arrow-name words.
"""

from __future__ import annotations


def enumerate_surviving_paths(
    n_vertices: int,
    arrows: list[tuple[str, int, int]],
    forbidden_words: list[tuple[str, ...]],
    cap: int = 1_000_000,
) -> list[tuple[str, ...]]:
    by_source: dict[int, list[tuple[str, int]]] = {v: [] for v in range(1, n_vertices + 1)}
    target_of: dict[str, int] = {}
    for name, s, t in arrows:
        by_source[s].append((name, t))
        target_of[name] = t
    forbidden = [tuple(w) for w in forbidden_words]

    def dies(word: tuple[str, ...]) -> bool:
        # Prefixes were already checked, so only suffixes ending at the new
        # arrow can introduce a forbidden factor.
        for f in forbidden:
            if len(f) <= len(word) and word[-len(f):] == f:
                return True
        return False

    survivors: list[tuple[str, ...]] = [() for _ in range(n_vertices)]
    frontier: list[tuple[tuple[str, ...], int]] = [((), v) for v in range(1, n_vertices + 1)]
    while frontier:
        new_frontier = []
        for word, at in frontier:
            for name, t in by_source[at]:
                longer = word + (name,)
                if dies(longer):
                    continue
                survivors.append(longer)
                if len(survivors) > cap:
                    raise RuntimeError("oracle cap exceeded")
                new_frontier.append((longer, t))
        frontier = new_frontier
    return survivors


def algebra_dimension(n_vertices, arrows, forbidden_words) -> int:
    return len(enumerate_surviving_paths(n_vertices, arrows, forbidden_words))


def loewy_length(n_vertices, arrows, forbidden_words) -> int:
    paths = enumerate_surviving_paths(n_vertices, arrows, forbidden_words)
    return 1 + max(len(w) for w in paths)


def projective_dimensions_by_vertex(n_vertices, arrows, forbidden_words) -> dict[int, int]:
    """dim of each e_i * A: surviving paths grouped by their start vertex."""
    source_of = {name: s for name, s, _ in arrows}
    dims = {v: 0 for v in range(1, n_vertices + 1)}
    trivially = 0
    for word in enumerate_surviving_paths(n_vertices, arrows, forbidden_words):
        if word:
            dims[source_of[word[0]]] += 1
        else:
            trivially += 1
    assert trivially == n_vertices
    for v in dims:
        dims[v] += 1
    return dims
