"""Numeric SL(2, C) layer: trace gradients, the form B and Goldman brackets on the torus."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .diagram import Multicurve, SurfaceKind

# basis order of LieVector coordinates: X, H, Y
X = np.array([[0, 1], [0, 0]], dtype=complex)
H = np.array([[1, 0], [0, -1]], dtype=complex)
Y = np.array([[0, 0], [1, 0]], dtype=complex)
LIE_BASIS = (X, H, Y)

FORM_B = np.array([[0, 0, -1], [0, -2, 0], [-1, 0, 0]], dtype=complex)

GROUP_TOL = 1e-9


def lie_vector(x=0, eta=0, y=0) -> np.ndarray:
    return np.array([x, eta, y], dtype=complex)


def lie_matrix(v: np.ndarray) -> np.ndarray:
    return v[0] * X + v[1] * H + v[2] * Y


def is_group_element(a: np.ndarray, tol: float = GROUP_TOL) -> bool:
    return a.shape == (2, 2) and abs(np.linalg.det(a) - 1) <= tol


def grad_trace(a: np.ndarray) -> np.ndarray:
    """Gradient of the trace at ``a`` with respect to B, in X, H, Y coordinates."""
    return lie_vector(-a[0, 1], -0.5 * (a[0, 0] - a[1, 1]), -a[1, 0])


def form_B(u: np.ndarray, v: np.ndarray) -> complex:
    return complex(u @ FORM_B @ v)


def expm_sl2(w: np.ndarray) -> np.ndarray:
    """Matrix exponential of a traceless 2x2 matrix (closed form)."""
    d = w[0, 0] * w[1, 1] - w[0, 1] * w[1, 0]
    mu = np.sqrt(-d + 0j)
    if abs(mu) < 1e-12:
        return np.eye(2, dtype=complex) + w
    return np.cosh(mu) * np.eye(2, dtype=complex) + (np.sinh(mu) / mu) * w


def trace_differential_fd(a: np.ndarray, w: np.ndarray, step: float = 1e-5) -> complex:
    """Centered difference of tr(a exp(s w)) at s = 0."""
    plus = np.trace(a @ expm_sl2(step * w))
    minus = np.trace(a @ expm_sl2(-step * w))
    return complex((plus - minus) / (2 * step))


def trace_identities_check(a: np.ndarray, b: np.ndarray) -> float:
    """Largest residual of tr(ab)=tr(ba), tr(a)=tr(a^-1), tr(ab)+tr(ab^-1)=tr(a)tr(b)."""
    ai, bi = np.linalg.inv(a), np.linalg.inv(b)
    r1 = abs(np.trace(a @ b) - np.trace(b @ a))
    r2 = max(abs(np.trace(a) - np.trace(ai)), abs(np.trace(b) - np.trace(bi)))
    r3 = abs(np.trace(a @ b) + np.trace(a @ bi) - np.trace(a) * np.trace(b))
    return float(max(r1, r2, r3))


@dataclass(frozen=True)
class TorusRep:
    """Commuting pair assigning (p, q) to ``ma^p mb^q``."""

    ma: np.ndarray
    mb: np.ndarray

    def __post_init__(self):
        for m in (self.ma, self.mb):
            if not is_group_element(m):
                raise ValueError("matrices must lie in SL(2, C)")
        if np.abs(self.ma @ self.mb - self.mb @ self.ma).max() > GROUP_TOL:
            raise ValueError("torus representation needs commuting matrices")

    def __call__(self, p: int, q: int) -> np.ndarray:
        return np.linalg.matrix_power(self.ma, p) @ np.linalg.matrix_power(self.mb, q)


def random_sl2(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    m = rng.normal(scale=scale, size=(2, 2)) + 1j * rng.normal(scale=scale, size=(2, 2))
    d = np.linalg.det(m)
    return m / np.sqrt(d)


def random_torus_rep(rng: np.random.Generator) -> TorusRep:
    """Simultaneously diagonalisable pair: a random diagonal pair conjugated by a random element."""
    def diag():
        z = np.exp(rng.uniform(-0.6, 0.6) + 1j * rng.uniform(-np.pi, np.pi))
        return np.diag([z, 1 / z])

    g = random_sl2(rng)
    gi = np.linalg.inv(g)
    return TorusRep(g @ diag() @ gi, g @ diag() @ gi)


def parabolic_torus_rep(x: complex, y: complex, sign_a: int = 1, sign_b: int = 1) -> TorusRep:
    """Commuting parabolic pair ``±[[1, x], [0, 1]]``, ``±[[1, y], [0, 1]]``."""
    ma = sign_a * np.array([[1, x], [0, 1]], dtype=complex)
    mb = sign_b * np.array([[1, y], [0, 1]], dtype=complex)
    return TorusRep(ma, mb)


def character_eval(x, rho: TorusRep) -> complex:
    """Value of a multicurve or a ``{Multicurve: coefficient}`` combination at ``rho``.

    A curve of class (p, q) contributes -tr(rho(p, q)); components multiply.
    """
    if isinstance(x, Multicurve):
        if x.is_empty:
            return 1.0 + 0j
        if x.surface is not SurfaceKind.TORUS:
            raise ValueError("numeric characters are only modelled on the torus")
        return complex((-np.trace(rho(x.p, x.q))) ** x.m)
    terms: Mapping = x.terms if hasattr(x, "terms") else x
    return complex(sum(complex(c) * character_eval(mc, rho) for mc, c in terms.items()))


def intersection_number(alpha: tuple[int, int], beta: tuple[int, int]) -> int:
    """Algebraic intersection ps - qr of (p, q) with (r, s)."""
    (p, q), (r, s) = alpha, beta
    return p * s - q * r


def goldman_numeric(alpha: tuple[int, int], beta: tuple[int, int], rho: TorusRep, orientation: int = -1) -> complex:
    """Goldman bracket {tr_alpha, tr_beta} at ``rho`` for primitive torus classes.

    All |ps - qr| intersection points have the same sign, and on the torus the
    based loops at each point are ``rho(alpha)``, ``rho(beta)``.  Each point
    contributes ``B(grad tr(a), grad tr(b)) = (tr(a b^-1) - tr(a b)) / 2``.
    ``orientation`` fixes the sign of a point relative to ``ps - qr``; the
    default ``-1`` is the orientation in which stacking alpha over beta is
    the product alpha * beta of the skein algebra.
    """
    a = rho(*alpha)
    b = rho(*beta)
    n = intersection_number(alpha, beta)
    if n == 0:
        return 0j
    per_point = form_B(grad_trace(a), grad_trace(b))
    return orientation * n * per_point


# -- representation fixtures ------------------------------------------------

def parse_complex(token: str) -> complex:
    s = token.replace(" ", "")
    if s.endswith(("i", "j")):
        s = s[:-1] + "j"
        body = s[:-1]
        if body in ("", "+"):
            s = "1j"
        elif body == "-":
            s = "-1j"
        elif body.endswith(("+", "-")):
            s = body + "1j"
    return complex(s)


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}i"


def parse_rep(text: str) -> TorusRep:
    """Two 2x2 blocks separated by blank lines; entries like ``2+0i``."""
    blocks, cur = [], []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            if cur:
                blocks.append(cur)
                cur = []
            continue
        cur.append([parse_complex(t) for t in line.replace(",", " ").split()])
    if cur:
        blocks.append(cur)
    if len(blocks) != 2 or any(len(b) != 2 or any(len(r) != 2 for r in b) for b in blocks):
        raise ValueError("a representation file holds exactly two 2x2 matrices")
    return TorusRep(np.array(blocks[0], dtype=complex), np.array(blocks[1], dtype=complex))


def format_rep(rho: TorusRep) -> str:
    out = []
    for m in (rho.ma, rho.mb):
        out.append("\n".join(" ".join(format_complex(v) for v in row) for row in m))
    return "\n\n".join(out) + "\n"
