"""Words over a generating alphabet.

A word is a tuple of nonzero signed letters: +i means generator i (1-based),
-i its inverse.  The text form uses 'a'..'z' for generators and 'A'..'Z' for
inverses, so "abA" is generator 1, generator 2, inverse of generator 1.
"""

from __future__ import annotations


def parse_word(text: str) -> tuple[int, ...]:
    letters = []
    for ch in text:
        if ch.isspace():
            continue
        if "a" <= ch <= "z":
            letters.append(ord(ch) - ord("a") + 1)
        elif "A" <= ch <= "Z":
            letters.append(-(ord(ch) - ord("A") + 1))
        else:
            raise ValueError(f"bad letter {ch!r} in word {text!r}")
    return tuple(letters)


def format_word(letters) -> str:
    out = []
    for x in letters:
        if x == 0 or abs(x) > 26:
            raise ValueError("letters must be nonzero and at most 26 for text form")
        base = ord("a") if x > 0 else ord("A")
        out.append(chr(base + abs(x) - 1))
    return "".join(out) or ""


def free_reduce(letters) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def as_letters(word, d: int) -> tuple[int, ...]:
    """Normalize a word given as text or letter sequence; validate range."""
    letters = parse_word(word) if isinstance(word, str) else tuple(word)
    for x in letters:
        if x == 0 or abs(x) > d:
            raise ValueError(f"letter {x} out of range for {d} generators")
    return letters


def reduced_words(d: int, max_len: int):
    """All freely reduced words of length <= max_len in shortlex order.

    Letter order within a length: 1, ..., d, -1, ..., -d.
    """
    order = list(range(1, d + 1)) + list(range(-1, -d - 1, -1))
    layer: list[tuple[int, ...]] = [()]
    yield ()
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for x in order:
                if w and w[-1] == -x:
                    continue
                nw = w + (x,)
                nxt.append(nw)
                yield nw
        layer = nxt
