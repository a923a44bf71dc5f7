"""
Text and JSON file formats for graphs, hypergraphs and certificates.

Graphs are plain text: a header line ``n m_edges`` followed by one ``u v``
pair per line, zero based with ``u < v``. Hypergraphs use the header
``n r m_edges`` followed by ``r`` strictly increasing vertices per line.
Certificates and reports are JSON, written with ``simplejson``.
"""
import contextlib
import logging
import os
import os.path

import simplejson as json

from .core import FCopy, FCycleCert, Graph, Hypergraph, KrCycleCert, \
    LooseHCCert
from .errors import FormatError, GraphError

logger = logging.getLogger(__name__)


try:
    import fcntl
except ImportError:
    logger.warning("Unable to import 'fcntl'. Will be unable to lock files")
    fcntl = None


@contextlib.contextmanager
def _locked_output(path):
    """Open ``path`` for writing under an exclusive, non-blocking lock."""
    with open(os.path.expanduser(path), 'w+') as f:
        if fcntl is not None:
            fcntl.flock(f, fcntl.LOCK_EX | fcntl.LOCK_NB)
        try:
            yield f
        finally:
            if fcntl is not None:
                fcntl.flock(f, fcntl.LOCK_UN)


def _data_lines(handle):
    """Non-blank lines of a text file, with ``#`` comments removed."""
    for line in handle:
        line = line.split('#', 1)[0].strip()
        if line:
            yield line


def _parse_ints(line, count, path):
    try:
        values = [int(token) for token in line.split()]
    except ValueError:
        raise FormatError(f'{path}: non-integer token in {line!r}') from None
    if len(values) != count:
        raise FormatError(f'{path}: expected {count} integers in {line!r}')
    return values


def parse_graph(text, path='<string>'):
    """Parse the text graph format from a string."""
    lines = _data_lines(text.splitlines())
    try:
        n, m_edges = _parse_ints(next(lines), 2, path)
    except StopIteration:
        raise FormatError(f'{path}: empty graph file') from None
    edges = []
    for line in lines:
        u, v = _parse_ints(line, 2, path)
        if not u < v:
            raise FormatError(f'{path}: edge {u} {v} is not written with '
                              f'u < v')
        edges.append((u, v))
    if len(edges) != m_edges:
        raise FormatError(f'{path}: header announces {m_edges} edges, found '
                          f'{len(edges)}')
    try:
        return Graph(n, edges)
    except GraphError as exc:
        raise FormatError(f'{path}: {exc}') from exc


def parse_hypergraph(text, path='<string>'):
    """Parse the text hypergraph format from a string."""
    lines = _data_lines(text.splitlines())
    try:
        n, r, m_edges = _parse_ints(next(lines), 3, path)
    except StopIteration:
        raise FormatError(f'{path}: empty hypergraph file') from None
    edges = []
    for line in lines:
        edge = _parse_ints(line, r, path)
        if any(a >= b for a, b in zip(edge, edge[1:])):
            raise FormatError(f'{path}: edge {edge} is not strictly '
                              f'increasing')
        edges.append(edge)
    if len(edges) != m_edges:
        raise FormatError(f'{path}: header announces {m_edges} edges, found '
                          f'{len(edges)}')
    try:
        return Hypergraph(n, r, edges)
    except GraphError as exc:
        raise FormatError(f'{path}: {exc}') from exc


def load_graph(path):
    """Read a graph file."""
    with open(os.path.expanduser(path), 'r') as f:
        return parse_graph(f.read(), path=path)


def load_hypergraph(path):
    """Read a hypergraph file."""
    with open(os.path.expanduser(path), 'r') as f:
        return parse_hypergraph(f.read(), path=path)


def format_graph(g):
    lines = [f'{g.n} {g.num_edges}']
    lines.extend(f'{u} {v}' for u, v in g.edges)
    return '\n'.join(lines) + '\n'


def format_hypergraph(h):
    lines = [f'{h.n} {h.r} {len(h)}']
    lines.extend(' '.join(map(str, edge)) for edge in h.edges)
    return '\n'.join(lines) + '\n'


def store_graph(g, path):
    """Write a graph file."""
    with _locked_output(path) as f:
        f.write(format_graph(g))


def store_hypergraph(h, path):
    """Write a hypergraph file."""
    with _locked_output(path) as f:
        f.write(format_hypergraph(h))


def certificate_to_json(cert):
    """
    JSON-ready form of a certificate.

    K_r-cycles and loose Hamilton cycles become arrays of vertex arrays;
    F-cycles become arrays of ``{"vertices": ..., "edges": ...}`` objects.
    """
    if isinstance(cert, KrCycleCert):
        return [list(clique) for clique in cert.cliques]
    if isinstance(cert, LooseHCCert):
        return [list(edge) for edge in cert.edges]
    if isinstance(cert, FCycleCert):
        return [{'vertices': list(copy.vertices),
                 'edges': [list(edge) for edge in copy.edges]}
                for copy in cert.copies]
    raise TypeError(f'{cert!r} is not a certificate')


def certificate_from_json(doc, kind):
    """
    Rebuild a certificate from its JSON form.

    Parameters
    ----------
    doc : list
    kind : {'kr-cycle', 'loose-hc', 'f-cycle'}
    """
    if not isinstance(doc, list):
        raise FormatError('A certificate must be a JSON array')
    try:
        if kind == 'kr-cycle':
            r = len(doc[0]) if doc else 0
            return KrCycleCert(r, [[int(v) for v in clique]
                                   for clique in doc])
        if kind == 'loose-hc':
            return LooseHCCert.from_edges([[int(v) for v in edge]
                                           for edge in doc])
        if kind == 'f-cycle':
            return FCycleCert(
                FCopy(tuple(sorted(int(v) for v in item['vertices'])),
                      tuple(sorted(tuple(sorted(map(int, edge)))
                                   for edge in item['edges'])))
                for item in doc
            )
    except (TypeError, KeyError, ValueError) as exc:
        raise FormatError(f'Malformed {kind} certificate: {exc}') from exc
    raise ValueError(f'Unknown certificate kind {kind!r}')


def dumps(doc):
    """Serialize a document the way every krcycles JSON output is written."""
    return json.dumps(doc, sort_keys=True, indent=2)


def store_json(doc, path):
    """Stash a JSON document in ``path``."""
    with _locked_output(path) as f:
        json.dump(doc, f, sort_keys=True, indent=2)


def load_json(path):
    """Load a JSON document, raising FormatError when it is unreadable."""
    with open(os.path.expanduser(path), 'r') as f:
        raw_json = f.read()
    try:
        return json.loads(raw_json)
    except json.JSONDecodeError as exc:
        raise FormatError(f'{path}: invalid JSON ({exc})') from exc
