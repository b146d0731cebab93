"""Hand-transcribed Fox derivatives of alpha and beta(m, n).

Built from group-ring arithmetic only (no call to fox_derivative), so they
serve as an independent reference for the derivative engine.
"""

from __future__ import annotations

from sigforge.freegroup import GroupRingElement, X, gen, parse_word

G = GroupRingElement


def _w(text: str) -> GroupRingElement:
    return G.of(parse_word(text))


def _geometric(letter: str, k: int) -> GroupRingElement:
    """1 + g + ... + g^(k-1)."""
    out = G.zero()
    for i in range(k):
        out = out + G.of(parse_word(letter) ** i)
    return out


def expected_table(m: int, n: int) -> dict[str, GroupRingElement]:
    c = _w("[y,x^-1]")
    x_m = G.of(gen(X, -m))
    zn = G.of(parse_word("z") ** n)
    zn_inv = G.of(parse_word("z") ** -n)
    y_inv, w_inv = _w("y^-1"), _w("w^-1")
    yxm = _w("y") * G.of(gen(X, m))
    return {
        "dalpha/dx": G.zero(),
        "dalpha/dy": G.zero(),
        "dalpha/dz": _w("w z^-1") * (w_inv - 1),
        "dalpha/dw": 1 - _w("w z^-1 w^-1"),
        "dbeta/dx": _w("y x^-1") * (y_inv - 1)
        + c * x_m * (y_inv * zn * w_inv * _w("y") - 1) * _geometric("x", m),
        "dbeta/dy": 1 - _w("y x^-1 y^-1") + c * x_m * y_inv * (zn * w_inv - 1),
        "dbeta/dz": c * x_m * y_inv * (1 - zn * w_inv * yxm * _w("w") * zn_inv) * _geometric("z", n),
        "dbeta/dw": c * x_m * y_inv * zn * w_inv * (yxm - 1),
    }
