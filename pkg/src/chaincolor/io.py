"""Text formats for graphs, labels, families, systems, colourings and priors.

Vertex ids are 1-based on disk and 0-based in memory.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

from . import bitsets as bs
from .chains import Chain
from .compression import Distribution
from .families import SetFamily
from .graph import AdjGraph, ColorMap, Pair
from .systems import EdgeSetSystem


def _lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith(("#", "c "))]


# -- graphs --------------------------------------------------------------------


def dimacs_text(g: AdjGraph) -> str:
    out = [f"p edge {g.n} {g.n_edges}"]
    out += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(out) + "\n"


def parse_dimacs(text: str, labels: Sequence | None = None) -> AdjGraph:
    n = None
    edges = []
    for ln in _lines(text):
        parts = ln.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise ValueError(f"bad header line {ln!r}")
            n = int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise ValueError("edge line before the header")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            if (u, v) in edges or (v, u) in edges:
                continue
            edges.append((u, v))
        else:
            raise ValueError(f"unexpected line {ln!r}")
    if n is None:
        raise ValueError("missing 'p edge' header")
    if labels is not None and len(labels) != n:
        raise ValueError(f"{len(labels)} labels for {n} vertices")
    return AdjGraph.from_edges(n, edges, labels)


def labels_text(g: AdjGraph) -> str:
    if g.labels is None:
        return ""
    return "".join(f"{i + 1}\t{_label_text(lab)}\n" for i, lab in enumerate(g.labels))


def _label_text(lab) -> str:
    return lab.text() if isinstance(lab, Chain) else str(lab)


def parse_labels(text: str, m: int) -> list[Chain]:
    rows = []
    for ln in _lines(text):
        vid, chain = ln.split("\t")
        rows.append((int(vid), Chain.parse(chain, m)))
    rows.sort()
    if [v for v, _ in rows] != list(range(1, len(rows) + 1)):
        raise ValueError("label ids must be 1..n")
    return [c for _, c in rows]


def write_graph(g: AdjGraph, path: Path) -> None:
    path = Path(path)
    path.write_text(dimacs_text(g))
    if g.labels is not None:
        Path(str(path) + ".labels").write_text(labels_text(g))


def read_graph(path: Path, m: int | None = None) -> AdjGraph:
    path = Path(path)
    labels = None
    side = Path(str(path) + ".labels")
    if m is not None and side.exists():
        labels = parse_labels(side.read_text(), m)
    return parse_dimacs(path.read_text(), labels)


# -- families and systems ------------------------------------------------------


def family_text(fam: SetFamily) -> str:
    return f"n={fam.n}\n" + "".join(bs.format_set(a) + "\n" for a in fam.members)


def _header_n(line: str) -> int:
    if not line.startswith("n="):
        raise ValueError(f"expected header 'n=<n>', got {line!r}")
    return int(line[2:])


def parse_family(text: str) -> SetFamily:
    # empty member lines are meaningful, so only strip comments here
    raw = [ln.strip() for ln in text.splitlines() if not ln.lstrip().startswith("#")]
    while raw and not raw[-1]:
        raw.pop()
    if not raw:
        raise ValueError("empty family file")
    return SetFamily(_header_n(raw[0]), tuple(bs.parse_set(ln) for ln in raw[1:]))


def system_text(sys: EdgeSetSystem) -> str:
    out = [f"n={sys.n}"]
    for (u, v) in sorted(sys.sets):
        out.append(f"{u + 1} {v + 1} : {bs.format_set(sys.sets[(u, v)])}")
    return "\n".join(out) + "\n"


def parse_system(text: str) -> EdgeSetSystem:
    rows = _lines(text)
    if not rows:
        raise ValueError("empty system file")
    n = _header_n(rows[0])
    sets = {}
    for ln in rows[1:]:
        head, _, body = ln.partition(":")
        u, v = (int(t) - 1 for t in head.split())
        key = (u, v) if u < v else (v, u)
        if key in sets:
            raise ValueError(f"edge {u + 1} {v + 1} listed twice")
        sets[key] = bs.parse_set(body)
    return EdgeSetSystem(n, sets)


def pairs_text(pairs: Iterable[Pair]) -> str:
    return "".join(f"{v + 1} : {','.join(str(u + 1) for u in sorted(s))}\n" for v, s in pairs)


def parse_pairs(text: str) -> list[Pair]:
    out = []
    for ln in _lines(text):
        head, _, body = ln.partition(":")
        members = frozenset(e - 1 for e in bs.elements(bs.parse_set(body)))
        out.append((int(head) - 1, members))
    return out


# -- colourings ----------------------------------------------------------------


def colormap_text(c: ColorMap) -> str:
    return "".join(f"{v + 1}\t{col}\n" for v, col in enumerate(c.colors))


def parse_colormap(text: str, palette: int | None = None) -> ColorMap:
    rows = sorted((int(a), int(b)) for a, b in (ln.split("\t") for ln in _lines(text)))
    if [v for v, _ in rows] != list(range(1, len(rows) + 1)):
        raise ValueError("colour rows must cover vertices 1..n")
    colors = tuple(c for _, c in rows)
    return ColorMap(colors, palette if palette is not None else max(colors, default=0))


def s1_colormap_text(colors: dict) -> str:
    items = sorted(colors.items(), key=lambda kv: kv[0].key())
    return "".join(f"{a.text()}\t{c}\n" for a, c in items)


def parse_s1_colormap(text: str, m: int) -> dict:
    out = {}
    for ln in _lines(text):
        chain, col = ln.split("\t")
        out[Chain.parse(chain, m)] = int(col)
    return out


# -- priors --------------------------------------------------------------------


def distribution_text(D: Distribution) -> str:
    return "".join(f"{i}\t{p!r}\n" for i, p in enumerate(D.probs, start=1))


def parse_distribution(text: str) -> Distribution:
    rows = sorted((int(a), float(b)) for a, b in (ln.split("\t") for ln in _lines(text)))
    if [i for i, _ in rows] != list(range(1, len(rows) + 1)):
        raise ValueError("distribution rows must be indexed 1..N")
    return Distribution.of([p for _, p in rows])
