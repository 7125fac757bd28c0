"""Closed-form eigenmodes for the disk and rectangle.

These are the ground truth against which the boundary-integral solver, the
limit-measure normalization, and all Cesaro statistics are checked.  Boundary
traces are sampled on a uniform shifted arclength grid and the interior L2
normalization is exact (Bessel norm integrals / separable products).

Robin convention: the boundary condition is d_nu u + K u = 0 with outward
normal nu and K >= 0 (constant impedance kappa, or the first-order multiplier
kappa |D_s|).  Eigenvalues are then nondecreasing in kappa and reduce to
Neumann at kappa = 0.  On the disk the multiplier K = kappa |D_s| acts on the
angular mode m as the constant kappa * m / R, so the radial matching equation
is z J_m'(z) + c J_m(z) = 0 with z = lambda R and c = kappa R (constant form)
or c = kappa m (multiplier form).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bessel import bessel_j_ladder, bessel_zero, bessel_zeros_upto
from .errors import IndexingError, InvalidSpecError
from .geometry import BoundaryCurve, DomainSpec, boundary_frames, build_domain

ORACLE_NORM_ERROR = 1e-14  # closed-form normalization certificate


@dataclass(frozen=True)
class BCKind:
    """Boundary condition tag: dirichlet | neumann | robin.

    Robin carries kappa >= 0 and form "constant" (order-0 impedance) or
    "multiplier" (first-order symbol kappa |xi|).
    """

    kind: str
    kappa: float = 0.0
    form: str = "constant"

    def validate(self):
        if self.kind not in ("dirichlet", "neumann", "robin"):
            raise InvalidSpecError(f"unknown bc kind {self.kind!r}")
        if self.kind == "robin":
            if self.kappa < 0:
                raise InvalidSpecError("robin kappa must be >= 0 (K non-negative)")
            if self.form not in ("constant", "multiplier"):
                raise InvalidSpecError(f"unknown robin form {self.form!r}")

    def label(self):
        if self.kind != "robin":
            return self.kind
        return f"robin-{self.form}-k{self.kappa:g}"


@dataclass
class Mode:
    """One normalized eigenfunction, reduced to its boundary data.

    u and v hold the boundary trace and outward normal derivative on the
    uniform arclength grid s; the interior L2 norm equals norm_value with
    estimated relative error norm_error (the normalization certificate).
    """

    lam: float
    bc: BCKind
    domain_hash: str
    L: float
    s: np.ndarray
    u: np.ndarray
    v: np.ndarray
    norm_value: float
    norm_error: float
    provenance: str
    degeneracy: str
    meta: dict = field(default_factory=dict)

    @property
    def M(self):
        return self.s.size

    def min_grid(self):
        return math.ceil((8.0 / (2 * math.pi)) * self.lam * self.L)


def default_grid_size(lam, L, density=8.0, m_min=64):
    M = max(int(math.ceil(density * lam * L / (2 * math.pi))), m_min)
    return M + (M % 2)


def bc_residual(mode: Mode) -> float:
    """Relative sup-norm of the boundary-condition residual on the grid."""
    lam = mode.lam
    scale = max(np.abs(mode.u).max() * max(lam, 1.0), np.abs(mode.v).max(), 1e-300)
    bc = mode.bc
    if bc.kind == "dirichlet":
        return float(np.abs(mode.u).max() * max(lam, 1.0) / scale)
    if bc.kind == "neumann":
        return float(np.abs(mode.v).max() / scale)
    if bc.form == "constant":
        res = mode.v + bc.kappa * mode.u
    else:
        res = mode.v + bc.kappa * _abs_ds_apply(mode.u, mode.L)
    return float(np.abs(res).max() / scale)


def _abs_ds_apply(f, L):
    """|D_s| as a Fourier multiplier on a uniform (possibly shifted) grid."""
    M = f.size
    fh = np.fft.fft(f)
    m = np.fft.fftfreq(M, d=1.0 / M)
    out = np.fft.ifft(fh * np.abs(2 * np.pi * m / L))
    return out.real if np.isrealobj(f) else out


def robin_disk_zeros_upto(m: int, c: float, z_max: float) -> np.ndarray:
    """Positive roots of z J_m'(z) + c J_m(z) = 0 up to z_max (c >= 0).

    Exactly one root lies in each interval between consecutive Dirichlet
    zeros (j_{m,0} := 0), since z J_m'(z) alternates sign there.
    """
    if c == 0.0:
        return bessel_zeros_upto("jprime", m, z_max)
    jz = bessel_zeros_upto("j", m, z_max + 4.0)
    brackets = [(1e-9 if m == 0 else m * 1e-3, jz[0])] + list(zip(jz[:-1], jz[1:]))
    roots = []
    for lo, hi in brackets:
        if lo >= z_max:
            break
        root = _robin_root(m, c, lo, hi)
        if root is not None and root <= z_max:
            roots.append(root)
    return np.array(roots)


def _robin_root(m, c, lo, hi):
    def g_and_dg(z):
        lad = bessel_j_ladder(m + 2, z)
        j = lad[m]
        jp = -lad[1] if m == 0 else 0.5 * (lad[m - 1] - lad[m + 1])
        jpp = -jp / z - (1.0 - m * m / (z * z)) * j
        return z * jp + c * j, jp + z * jpp + c * jp

    glo = g_and_dg(lo)[0]
    ghi = g_and_dg(hi)[0]
    if glo == 0.0:
        return lo
    if (glo > 0) == (ghi > 0):
        return None
    x = 0.5 * (lo + hi)
    for _ in range(80):
        gx, dgx = g_and_dg(x)
        if (gx > 0) == (glo > 0):
            lo = x
        else:
            hi = x
        xn = x - gx / dgx if dgx != 0 else 0.5 * (lo + hi)
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) < 1e-15 * x:
            return xn
        x = xn
    return x


def disk_matching_zero(bc: BCKind, R: float, m: int, n: int) -> float:
    """lambda for the disk radial matching equation, n-th root (n >= 1)."""
    bc.validate()
    if bc.kind == "dirichlet":
        return bessel_zero("j", m, n) / R
    if bc.kind == "neumann":
        return bessel_zero("jprime", m, n) / R
    c = bc.kappa * R if bc.form == "constant" else bc.kappa * m
    if c == 0.0:
        # multiplier with m = 0 (or kappa = 0) degenerates to Neumann
        return bessel_zero("jprime", m, n) / R
    # with c > 0 the n-th root lies in (j_{m,n-1}, j_{m,n}); j_{m,0} := 0
    hi = bessel_zero("j", m, n) * 1.0000001
    roots = robin_disk_zeros_upto(m, c, hi)
    if len(roots) < n:
        raise IndexingError(f"robin root (m={m}, n={n}) not bracketed")
    return roots[n - 1] / R


def disk_mode(R: float, bc: BCKind, m: int, n: int, M: int | None = None,
              density: float = 8.0) -> list[Mode]:
    """Normalized disk eigenmode(s) for angular order m, radial index n.

    Returns [mode] for m = 0 and the degenerate cos/sin pair for m >= 1 (the
    fixed recorded basis used by every ensemble statistic).
    """
    bc.validate()
    lam = disk_matching_zero(bc, R, m, n)
    z = lam * R
    lad = bessel_j_ladder(m + 1, z)
    jm = lad[m]
    jmp = -lad[1] if m == 0 else 0.5 * (lad[m - 1] - lad[m + 1])
    # int_0^R J_m(lam rho)^2 rho drho, valid at any z
    rad = (R * R / 2.0) * (jmp * jmp + (1.0 - m * m / (z * z)) * jm * jm)
    c_ang = 2 * math.pi if m == 0 else math.pi
    amp = 1.0 / math.sqrt(rad * c_ang)

    spec = DomainSpec("disk", radius=R)
    curve = build_domain(spec)
    L = curve.length
    if M is None:
        M = default_grid_size(lam, L, density)
    s = curve.arclength_grid(M)
    theta = s / R
    u_b = 0.0 if bc.kind == "dirichlet" else amp * jm
    v_b = amp * lam * jmp

    def make(trig, label):
        ang = trig(m * theta)
        u = np.full(M, u_b) * ang if np.ndim(u_b) == 0 else u_b * ang
        v = v_b * ang
        return Mode(lam=lam, bc=bc, domain_hash=spec.content_hash(), L=L, s=s,
                    u=np.asarray(u, dtype=float) if bc.kind != "dirichlet" else np.zeros(M),
                    v=np.asarray(v, dtype=float),
                    norm_value=1.0, norm_error=ORACLE_NORM_ERROR,
                    provenance="oracle", degeneracy=label,
                    meta={"m": m, "n": n, "shape": "disk", "radius": R,
                          "amp": amp, "angular": trig.__name__})

    if m == 0:
        return [make(np.cos, f"m0n{n}")]
    return [make(np.cos, f"m{m}n{n}:cos"), make(np.sin, f"m{m}n{n}:sin")]


def rectangle_mode(a: float, b: float, bc: BCKind, m: int, n: int,
                   M: int | None = None, density: float = 8.0) -> Mode:
    """Normalized rectangle eigenmode on sides 2a x 2b.

    Dirichlet needs m, n >= 1; Neumann allows m, n >= 0 except (0, 0), whose
    lambda = 0 constant mode is excluded from every ensemble.  Robin on a
    cornered domain is out of scope.
    """
    bc.validate()
    if bc.kind == "robin":
        raise InvalidSpecError("robin on the rectangle is not supported (corners)")
    if bc.kind == "dirichlet" and (m < 1 or n < 1):
        raise IndexingError("dirichlet rectangle modes need m, n >= 1")
    if bc.kind == "neumann" and (m < 0 or n < 0 or (m == 0 and n == 0)):
        raise IndexingError("neumann rectangle mode (0,0) is the excluded constant")
    kx = m * math.pi / (2 * a)
    ky = n * math.pi / (2 * b)
    lam = math.hypot(kx, ky)
    ix = a * (2.0 if (bc.kind == "neumann" and m == 0) else 1.0)
    iy = b * (2.0 if (bc.kind == "neumann" and n == 0) else 1.0)
    amp = 1.0 / math.sqrt(ix * iy)

    spec = DomainSpec("rectangle", a=a, b=b)
    curve = build_domain(spec)
    L = curve.length
    if M is None:
        M = default_grid_size(lam, L, density)
    s = curve.arclength_grid(M)
    P, _, N, _ = boundary_frames(curve, s)
    x = P[:, 0] + a
    y = P[:, 1] + b
    if bc.kind == "dirichlet":
        fx, fy = np.sin(kx * x), np.sin(ky * y)
        dfx, dfy = kx * np.cos(kx * x), ky * np.cos(ky * y)
        u = np.zeros(M)
    else:
        fx, fy = np.cos(kx * x), np.cos(ky * y)
        dfx, dfy = -kx * np.sin(kx * x), -ky * np.sin(ky * y)
        u = amp * fx * fy
    grad = amp * np.stack([dfx * fy, fx * dfy], axis=1)
    v = (grad * N).sum(axis=1)
    if bc.kind == "neumann":
        v = np.zeros(M)
    return Mode(lam=lam, bc=bc, domain_hash=spec.content_hash(), L=L, s=s,
                u=u, v=v, norm_value=1.0, norm_error=ORACLE_NORM_ERROR,
                provenance="oracle", degeneracy=f"m{m}n{n}",
                meta={"m": m, "n": n, "shape": "rectangle", "a": a, "b": b, "amp": amp})


def weyl_count(curve: BoundaryCurve, bc: BCKind, lam: float) -> float:
    """Two-term Weyl prediction for #{ eigenvalues <= lam }.

    Dirichlet subtracts the boundary term; Neumann and Robin add it.
    """
    if lam <= 0:
        return 0.0
    sign = 1.0 if bc.kind == "dirichlet" else -1.0
    return (curve.area / (4 * math.pi)) * lam**2 - sign * (curve.length / (4 * math.pi)) * lam


def disk_spectrum(R: float, bc: BCKind, lam_max: float):
    """All disk eigenvalues <= lam_max as sorted (lam, m, n) with m >= 1 doubled.

    The Neumann lambda = 0 constant mode is excluded (it has no semiclassical
    scale and every ensemble starts above it).
    """
    bc.validate()
    out = []
    z_max = lam_max * R
    m = 0
    while True:
        if bc.kind == "dirichlet":
            zs = bessel_zeros_upto("j", m, z_max)
        elif bc.kind == "neumann":
            zs = bessel_zeros_upto("jprime", m, z_max)
        else:
            c = bc.kappa * R if bc.form == "constant" else bc.kappa * m
            zs = robin_disk_zeros_upto(m, c, z_max)
        if len(zs) == 0 and m > z_max + 2:
            break
        for n, z in enumerate(zs, start=1):
            out.append((z / R, m, n))
        m += 1
    out.sort()
    return out


def disk_oracle_ensemble(R: float, bc: BCKind, n_modes: int, density: float = 8.0,
                         lam_hint: float | None = None) -> list[Mode]:
    """First n_modes disk modes sorted by lambda, degeneracies expanded."""
    lam_max = lam_hint or 2.2 * math.sqrt(max(n_modes, 4)) / R
    while True:
        spectrum = disk_spectrum(R, bc, lam_max)
        count = sum(1 if m == 0 else 2 for _, m, _ in spectrum)
        if count >= n_modes:
            break
        lam_max *= 1.3
    modes = []
    for lam, m, n in spectrum:
        modes.extend(disk_mode(R, bc, m, n, density=density))
        if len(modes) >= n_modes:
            break
    return modes[:n_modes]


def renormalize(mode: Mode, norm_value: float, norm_error: float) -> Mode:
    """Rescale traces so the interior L2 norm becomes 1, recording the certificate."""
    scale = 1.0 / math.sqrt(norm_value)
    return replace(mode, u=mode.u * scale, v=mode.v * scale,
                   norm_value=1.0, norm_error=norm_error,
                   meta={**mode.meta, "norm_scale": scale})
