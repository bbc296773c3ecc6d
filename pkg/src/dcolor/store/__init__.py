import logging
from pathlib import Path
from typing import List, Sequence, Tuple, Union

from dcolor.model import Graph, GraphError
from dcolor.model.coloring import Coloring, ColoringError

PathLike = Union[str, Path]

logger = logging.getLogger(__name__)


class NoSuchFileException(Exception):
    def __init__(self, path: Path):
        super(NoSuchFileException, self).__init__("File does not exist: {}".format(str(path)))


def _read_text(path: PathLike) -> str:
    path = Path(path)
    if not path.exists():
        raise NoSuchFileException(path)
    return path.read_text(encoding='ascii')


def format_graph(g: Graph) -> str:
    """
    Graph text format: "n m" then one "u v" line per edge with u < v, newline-terminated.
    """
    edges = g.get_edges()
    lines = [f'{g.get_n()} {len(edges)}'] + [f'{u} {v}' for (u, v) in edges]
    return '\n'.join(lines) + '\n'


def _ints(parts: List[str]) -> Tuple[int, ...]:
    try:
        return tuple(int(token) for token in parts)
    except ValueError:
        raise GraphError(f'Non-integer token in graph line: {" ".join(parts)}')


def parse_graph(text: str) -> Graph:
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines or len(lines[0]) != 2:
        raise GraphError('Graph header must be "n m"')
    n, m = _ints(lines[0])
    edge_lines = lines[1:]
    if len(edge_lines) != m:
        raise GraphError(f'Graph header announces {m} edges but {len(edge_lines)} follow')
    edges = []
    for parts in edge_lines:
        if len(parts) != 2:
            raise GraphError(f'Malformed edge line: {" ".join(parts)}')
        (u, v) = _ints(parts)
        if u >= v:
            raise GraphError(f'Edge line must list the smaller endpoint first: {u} {v}')
        edges.append((u, v))
    return Graph.from_edge_list(n, edges)


def write_graph(g: Graph, path: PathLike):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    logger.info(f'writing {g} to {path}')
    path.write_text(format_graph(g), encoding='ascii')


def read_graph(path: PathLike) -> Graph:
    return parse_graph(_read_text(path))


def format_coloring(c: Coloring) -> str:
    """
    Coloring text format: one line "D=<palette size>" followed by the colors in vertex order.
    """
    return str(c) + '\n'


def parse_coloring(text: str) -> Coloring:
    parts = text.split()
    if not parts or not parts[0].startswith('D='):
        raise ColoringError('Coloring line must start with D=<palette size>')
    palette_size = int(parts[0][2:])
    return Coloring([int(color) for color in parts[1:]], palette_size)


def write_coloring(c: Coloring, path: PathLike):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_coloring(c), encoding='ascii')


def read_coloring(path: PathLike) -> Coloring:
    return parse_coloring(_read_text(path))


def read_vertex_list(path: PathLike) -> List[int]:
    """
    Whitespace-separated vertex ids, used for permutation and script files.
    """
    return [int(token) for token in _read_text(path).split()]


def write_vertex_list(vertices: Sequence[int], path: PathLike):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(' '.join(str(v) for v in vertices) + '\n', encoding='ascii')


class TraceWriter:
    """
    Writes a run trace, one line per Step-2 selection: "step vertex draw draw ...".
    """

    def __init__(self, path: PathLike):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.out = self.path.open('w', encoding='ascii')
        self.step = 0

    def append(self, vertex: int, draws: Sequence[int]):
        self.out.write(f'{self.step} {vertex} ' + ' '.join(str(color) for color in draws) + '\n')
        self.step += 1

    def write_all(self, trace: Sequence[Tuple[int, Sequence[int]]]):
        for (vertex, draws) in trace:
            self.append(vertex, draws)

    def close(self):
        if self.out:
            self.out.close()
            self.out = None
            logger.info(f'wrote {self.step} trace lines to {self.path}')

    def __del__(self):
        self.close()

