"""Number and color rendering shared by serialization and script echoing."""

from __future__ import annotations


def fmt_number(x: float) -> float:
    """Round for serialization: up to 10 decimal places, so documents stay
    compact while round-tripping well inside 1e-9 absolute error."""
    r = round(float(x), 10)
    return int(r) if r == int(r) and abs(r) < 1e15 else r


def fmt_number_str(x: float) -> str:
    v = fmt_number(x)
    return repr(v) if isinstance(v, float) else str(v)


def color_hex(color: tuple[int, int, int]) -> str:
    r, g, b = color
    return f"#{r:02X}{g:02X}{b:02X}"


def parse_color_hex(text: str) -> tuple[int, int, int]:
    if len(text) != 7 or not text.startswith("#"):
        raise ValueError(f"bad color literal {text!r}")
    return tuple(int(text[i : i + 2], 16) for i in (1, 3, 5))  # type: ignore[return-value]
