from typing import Iterator, List, Tuple

from dcolor.model import Graph

Labels = Tuple[int, ...]


def canonical(colors) -> Labels:
    """
    Relabels colors by order of first appearance. Both processes treat the palette symmetrically,
    so colorings with the same canonical form have the same expected future.
    """
    relabel = {}
    out = []
    for color in colors:
        if color not in relabel:
            relabel[color] = len(relabel)
        out.append(relabel[color])
    return tuple(out)


def block_count(labels: Labels) -> int:
    return max(labels) + 1 if labels else 0


def falling_factorial(palette_size: int, k: int) -> int:
    # number of colorings sharing a canonical form with k distinct colors
    result = 1
    for i in range(k):
        result *= palette_size - i
    return result


def enumerate_canonical(n: int, palette_size: int) -> Iterator[Labels]:
    """
    All restricted growth strings of length n using at most palette_size labels.
    """
    labels = [0] * n

    def extend(pos: int, used: int) -> Iterator[Labels]:
        if pos == n:
            yield tuple(labels)
            return
        for label in range(min(used + 1, palette_size)):
            labels[pos] = label
            yield from extend(pos + 1, max(used, label + 1))

    if n == 0:
        yield ()
        return
    yield from extend(0, 0)


def conflicted_of(g: Graph, labels: Labels) -> List[int]:
    adjacency = g.get_adjacency()
    return [v for v in range(g.get_n()) if any(labels[u] == labels[v] for u in adjacency[v])]


def is_conflicted_in(g: Graph, labels: Labels, v: int) -> bool:
    return any(labels[u] == labels[v] for u in g.get_neighbors(v))


def free_count(g: Graph, labels: Labels, v: int, palette_size: int) -> int:
    return palette_size - len({labels[u] for u in g.get_neighbors(v)})


def recolor_targets(labels: Labels, v: int, palette_size: int) -> List[Tuple[Labels, int]]:
    """
    Canonical successors of recoloring v to each palette color, with the number of palette colors
    leading to each: one per label in use, and the unused colors pooled into a single fresh label.
    """
    k = block_count(labels)
    targets = []
    for label in range(k):
        targets.append((canonical(labels[:v] + (label,) + labels[v + 1:]), 1))
    if palette_size > k:
        targets.append((canonical(labels[:v] + (k,) + labels[v + 1:]), palette_size - k))
    return targets


def free_targets(g: Graph, labels: Labels, v: int, palette_size: int) -> List[Tuple[Labels, int]]:
    """
    recolor_targets restricted to colors no neighbor of v uses.
    """
    used = {labels[u] for u in g.get_neighbors(v)}
    k = block_count(labels)
    targets = []
    for label in range(k):
        if label not in used:
            targets.append((canonical(labels[:v] + (label,) + labels[v + 1:]), 1))
    if palette_size > k:
        targets.append((canonical(labels[:v] + (k,) + labels[v + 1:]), palette_size - k))
    return targets
