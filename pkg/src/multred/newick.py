"""Newick reading and writing for multi-labeled trees.

The accepted dialect is the plain Newick subset: nested parentheses,
comma-separated children, optional ``:length`` suffixes, optional internal
node names, terminating ``;``.  Leaf names may repeat; repeated names become
multiple leaves mapped to one label.  Labels compare by exact bytes after
trimming surrounding whitespace; quoted labels are unquoted first.
Underscores are kept verbatim.  In collection files, trees sit one per line
(more than one per line is fine when ';'-separated), blank lines are skipped
and ``#`` starts a comment line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .tree import MulTree, canonical_form

_STRUCTURAL = set("(),;:")


class NewickSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ParseIssue:
    line: int
    column: int
    message: str


@dataclass
class NewickDocument:
    """An ordered batch of parsed trees plus any per-tree parse errors."""

    trees: list[MulTree] = field(default_factory=list)
    line_numbers: list[int] = field(default_factory=list)
    errors: list[ParseIssue] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.trees)


class _Scanner:
    def __init__(self, text: str, line: int, column: int) -> None:
        self.text = text
        self.pos = 0
        self.line = line
        self.column = column

    def error(self, message: str) -> NewickSyntaxError:
        return NewickSyntaxError(message, self.line, self.column)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return ch

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.advance()

    def read_label(self) -> str:
        if self.peek() == "'":
            self.advance()
            out: list[str] = []
            while True:
                if self.pos >= len(self.text):
                    raise self.error("unterminated quoted label")
                ch = self.advance()
                if ch == "'":
                    if self.peek() == "'":
                        self.advance()
                        out.append("'")
                    else:
                        break
                else:
                    out.append(ch)
            return "".join(out)
        out = []
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in _STRUCTURAL:
                break
            out.append(ch)
            self.advance()
        return "".join(out).strip()

    def read_length(self) -> float:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _STRUCTURAL and not self.text[self.pos].isspace():
            self.advance()
        raw = self.text[start : self.pos]
        try:
            return float(raw)
        except ValueError:
            raise self.error(f"invalid branch length {raw!r}") from None


def parse_newick(
    text: str,
    *,
    keep_lengths: bool = False,
    line: int = 1,
    column: int = 1,
) -> MulTree:
    """Parse one ';'-terminated Newick expression into a normalized MulTree.

    The rooted syntax encodes an unrooted tree: the top-level node is an
    ordinary internal node and is spliced out if it ends up with degree two
    (or less).  Internal node names are discarded; branch lengths are
    discarded unless `keep_lengths` is set, in which case they are echoed on
    ``tree.edge_lengths`` (lengths across spliced nodes are summed).
    """
    sc = _Scanner(text, line, column)
    tree = MulTree()
    lengths: dict[frozenset[int], float] = {}
    stack: list[int] = []
    need_subtree = True
    opened_at: list[tuple[int, int]] = []

    while True:
        sc.skip_ws()
        ch = sc.peek()
        if need_subtree:
            if ch == "(":
                opened_at.append((sc.line, sc.column))
                sc.advance()
                node = tree.new_node()
                if stack:
                    tree.add_edge(stack[-1], node)
                stack.append(node)
                continue
            if ch == "" or ch in "),;:":
                raise sc.error("expected a subtree" if ch else "unexpected end of input")
            label = sc.read_label()
            if not label:
                raise sc.error("empty leaf name")
            leaf = tree.new_leaf(label, attach_to=stack[-1] if stack else None)
            sc.skip_ws()
            if sc.peek() == ":":
                sc.advance()
                length = sc.read_length()
                if stack:
                    lengths[frozenset((leaf, stack[-1]))] = length
            need_subtree = False
            continue
        if ch == ",":
            if not stack:
                raise sc.error("comma outside parentheses")
            sc.advance()
            need_subtree = True
            continue
        if ch == ")":
            if not stack:
                raise sc.error("unbalanced ')'")
            sc.advance()
            node = stack.pop()
            opened_at.pop()
            sc.skip_ws()
            if sc.peek() not in _STRUCTURAL and sc.peek() != "":
                sc.read_label()  # internal node name, discarded
            sc.skip_ws()
            if sc.peek() == ":":
                sc.advance()
                length = sc.read_length()
                if stack:
                    lengths[frozenset((node, stack[-1]))] = length
            continue
        if ch == ";":
            if stack:
                ln, col = opened_at[-1]
                raise NewickSyntaxError("unbalanced '('", ln, col)
            sc.advance()
            break
        if ch == "":
            raise sc.error("missing ';'")
        raise sc.error(f"unexpected character {ch!r}")

    sc.skip_ws()
    if sc.pos < len(sc.text):
        raise sc.error("trailing characters after ';'")
    if tree.n_leaves == 0:
        raise NewickSyntaxError("tree has no leaves", line, column)
    if keep_lengths:
        tree.edge_lengths = lengths
    tree.normalize()
    return tree


def write_newick(tree: MulTree) -> str:
    """Serialize deterministically: children ordered by canonical encoding.

    Isomorphic trees serialize identically; duplicate labels are emitted
    verbatim.  The empty tree serializes as ";" (which does not parse back).
    """
    if tree.n_nodes == 0:
        return ";"
    body = canonical_form(tree)
    if tree.n_nodes == 1:
        return f"({body});"
    return body + ";"


def _split_statements(line: str) -> Iterator[tuple[str, int]]:
    """Yield (chunk, start_column) for each ';'-terminated piece of a line."""
    start = 0
    i = 0
    quoted = False
    n = len(line)
    while i < n:
        ch = line[i]
        if ch == "'":
            quoted = not quoted
        elif ch == ";" and not quoted:
            yield line[start : i + 1], start + 1
            start = i + 1
        i += 1
    tail = line[start:]
    if tail.strip():
        yield tail, start + 1


def parse_collection(
    stream: Iterable[str] | IO[str],
    *,
    strict: bool = False,
    keep_lengths: bool = False,
) -> NewickDocument:
    """Parse a batch of Newick expressions, collecting per-tree errors.

    In lenient mode (default) malformed expressions are recorded in
    ``doc.errors`` and the batch continues; in strict mode the first syntax
    error aborts with its position.
    """
    doc = NewickDocument()
    for line_no, raw in enumerate(stream, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        for chunk, col in _split_statements(raw.rstrip("\n")):
            try:
                tree = parse_newick(chunk, keep_lengths=keep_lengths, line=line_no, column=col)
            except NewickSyntaxError as exc:
                if strict:
                    raise
                doc.errors.append(ParseIssue(exc.line, exc.column, exc.message))
                continue
            doc.trees.append(tree)
            doc.line_numbers.append(line_no)
    return doc
