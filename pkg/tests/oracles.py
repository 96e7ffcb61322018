"""Independent reference implementations used to check the engine.

Everything here is deliberately written against the documented query
semantics (token split, NOT extraction, AND > OR, left associativity,
implicit AND, case-insensitive substring containment) without touching
the production parser or SQL path.
"""

import random


def cell_text(value):
    return "" if value is None else str(value)


def split_not(tokens):
    """Pull NOT/term pairs out of the stream; returns (includes, excludes)."""
    includes, excludes = [], []
    i = 0
    while i < len(tokens):
        if tokens[i] == "NOT":
            excludes.append(tokens[i + 1])
            i += 2
        else:
            includes.append(tokens[i])
            i += 1
    return includes, excludes


def to_postfix(include_tokens):
    """Shunting-yard over AND/OR with implicit AND between adjacent terms."""
    explicit = []
    previous_was_term = False
    for token in include_tokens:
        if token in ("AND", "OR"):
            explicit.append(token)
            previous_was_term = False
        else:
            if previous_was_term:
                explicit.append("AND")
            explicit.append(token)
            previous_was_term = True

    precedence = {"AND": 2, "OR": 1}
    output, stack = [], []
    for token in explicit:
        if token in precedence:
            while stack and precedence[stack[-1]] >= precedence[token]:
                output.append(stack.pop())
            stack.append(token)
        else:
            output.append(token)
    while stack:
        output.append(stack.pop())
    return output


def row_matches(postfix, cells):
    """Evaluate the postfix include expression against lowered cells."""
    lowered = [c.lower() for c in cells]
    stack = []
    for token in postfix:
        if token == "AND":
            b, a = stack.pop(), stack.pop()
            stack.append(a and b)
        elif token == "OR":
            b, a = stack.pop(), stack.pop()
            stack.append(a or b)
        else:
            needle = token.lower()
            stack.append(any(needle in cell for cell in lowered))
    return stack[0]


def brute_force_search(rows, include_indexes, query_tokens):
    """Full reference scan: include over listed columns, exclude over all."""
    includes, excludes = split_not(query_tokens)
    postfix = to_postfix(includes)
    kept = []
    for row in rows:
        cells = [cell_text(v) for v in row]
        if not row_matches(postfix, [cells[i] for i in include_indexes]):
            continue
        if any(term.lower() in cell.lower()
               for term in excludes for cell in cells):
            continue
        kept.append(tuple(cells))
    return kept


def random_query_tokens(rng: random.Random, terms, max_terms=5):
    """Well-formed random token stream mixing AND/OR/NOT."""
    n_includes = rng.randint(1, max_terms)
    stream = [rng.choice(terms)]
    for _ in range(n_includes - 1):
        connective = rng.choice(["AND", "OR", ""])
        if connective:
            stream.append(connective)
        stream.append(rng.choice(terms))
    # NOT pairs may sit at any boundary that doesn't split an existing pair
    for _ in range(rng.randint(0, max(0, max_terms - n_includes))):
        spots = [i for i in range(len(stream) + 1) if i == 0 or stream[i - 1] != "NOT"]
        at = rng.choice(spots)
        stream[at:at] = ["NOT", rng.choice(terms)]
    return stream
