"""Spectral analysis of the Lax operator on the pure-point subspace.

For an N-soliton profile u, the operator L_u = D - T_u restricted to the
N-dimensional invariant subspace span{x^k / Q_u} has N simple negative
eigenvalues.  This module builds that restriction with residue inner
products, extracts normalized eigenfunctions, the angle variables
gamma_j = Re<G phi_j, phi_j> of the frequency-shift generator G, and the full
matrix M of G in the eigenbasis.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np
import scipy.linalg

from .errors import (
    DegenerateSpectrum,
    GramIllConditioned,
    InvariantViolation,
    PositivityFailure,
)
from .profiles import one_minus_theta, u_rational
from .rational import (
    PoleResidueForm,
    add,
    derivative,
    inner_product,
    multiply,
    multiply_by_x,
    pf_decompose,
    scale,
    szego_project,
)

ORDER_RESIDUAL_TOL = 1e-8
GAP_TOL = 1e-10
COND_LIMIT = 1e12
IM_M_TOL = 1e-9
# clustered broad solitons make the partial-fraction Gram ill-conditioned;
# beyond this gate the small dense eigenproblem runs in extended precision
FAST_COND_LIMIT = 1e6
MP_DPS = 40


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues, angles, eigenfunctions, and the generator matrix M."""

    lambdas: np.ndarray
    gammas: np.ndarray
    eigenfunctions: tuple
    m_matrix: np.ndarray
    gram_cond: float

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        gam = np.asarray(self.gammas, dtype=float)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "gammas", gam)
        object.__setattr__(self, "m_matrix",
                           np.asarray(self.m_matrix, dtype=complex))
        if np.any(lam >= 0):
            raise PositivityFailure("eigenvalues must be strictly negative")
        if np.any(np.diff(lam) <= 0):
            raise DegenerateSpectrum("eigenvalues must be strictly increasing")

    @property
    def n(self):
        return self.lambdas.size

    @property
    def actions(self):
        return 2 * np.pi * self.lambdas


def hpp_basis(params):
    """Basis e_k = x^k / Q_u, k = 0..N-1, expanded in partial fractions."""
    basis = []
    for k in range(params.n):
        num = [1.0] + [0.0] * k  # x^k, highest degree first
        basis.append(pf_decompose(num, params.zs))
    return basis


def _strip_high_orders(f, what):
    """Drop order >= 2 terms whose mass is below tolerance, else raise."""
    scale_ = max(f.coeff_scale(), 1.0)
    bad = [t for t in f.terms if t[1] >= 2]
    if bad:
        worst = max(abs(c) for _, _, c in bad)
        if worst > ORDER_RESIDUAL_TOL * scale_:
            raise InvariantViolation(
                f"{what}: residual pole mass {worst:.3e} at order >= 2")
    return PoleResidueForm(tuple(t for t in f.terms if t[1] == 1), f.constant)


def lax_apply(params, f):
    """L_u f = -i f' - P(u f), with P the Szego projection.

    The order-2 intermediates at the z_j must cancel; the post-check enforces
    that and returns a clean simple-pole element of the invariant subspace.
    """
    df = scale(derivative(f), -1j)
    tuf = szego_project(multiply(u_rational(params), f))
    out = add(df, scale(tuf, -1.0))
    return _strip_high_orders(out, "lax_apply")


def g_apply(params, f):
    """G f = x f - (i/2pi) <f, 1 - Theta>, the generator i d/dxi on Fourier side.

    The subtracted constant equals the sum of the simple-pole coefficients of
    f, so the constant part of the result cancels; the residual is checked.
    """
    omt = one_minus_theta(params)
    xf = multiply_by_x(f)
    boundary = inner_product(f, omt)  # = hat f at 0+
    resid = xf.constant - (1j / (2 * np.pi)) * boundary
    if abs(resid) > ORDER_RESIDUAL_TOL * max(1.0, f.coeff_scale()):
        raise InvariantViolation(
            f"g_apply: residual constant {abs(resid):.3e} did not cancel")
    return PoleResidueForm(xf.terms, 0j)


def lax_matrix(params):
    """Matrix of L_u in the partial-fraction basis c_r = 1/(x - z_r).

    Closed form: off-diagonal -i/(z_r - z_s); diagonal collects the
    remaining projected interaction terms.  Agrees with expanding
    :func:`lax_apply` applied to each c_r.
    """
    zs = np.array(params.zs)
    n = zs.size
    t = np.zeros((n, n), dtype=complex)
    for s in range(n):
        acc = 0j
        for r in range(n):
            if r != s:
                t[r, s] = -1j / (zs[r] - zs[s])
                acc += 1j / (zs[r] - zs[s])
        acc -= np.sum(1j / (zs.conj() - zs[s]))
        t[s, s] = acc
    return t


def _cauchy_kernel(zs):
    """K with <f, g> = f @ K @ conj(g) for coefficients in the c_r basis."""
    zs = np.asarray(zs)
    return 2j * np.pi / (zs.conj()[None, :] - zs[:, None])


def _eig_float(tmat, kern):
    """Eigenpairs of the Lax matrix with inverse-iteration polish.

    The Rayleigh quotient is taken in the L2 metric (kern), where the
    operator is self-adjoint, so eigenvalue errors are quadratic in the
    eigenvector error.
    """
    n = tmat.shape[0]
    lam_c, w = scipy.linalg.eig(tmat)
    order = np.argsort(lam_c.real)
    lam = lam_c.real[order].copy()
    w = w[:, order].astype(complex)
    eye = np.eye(n)
    for j in range(n):
        v = w[:, j]
        for _ in range(2):
            try:
                v2 = np.linalg.solve(tmat - lam[j] * eye, v)
            except np.linalg.LinAlgError:
                v2 = v
            if np.all(np.isfinite(v2)):
                v = v2 / np.linalg.norm(v2)
            num = (tmat @ v) @ kern @ v.conj()
            den = v @ kern @ v.conj()
            lam[j] = (num / den).real
        w[:, j] = v
    order = np.argsort(lam)
    return lam[order], w[:, order]


def _eig_mp(zs):
    """Extended-precision eigenpairs and raw generator matrix.

    Used for near-degenerate configurations; returns the eigenvalues, the
    L2-normalized eigenvector columns (phases not yet fixed), and the matrix
    <G phi_j, phi_k> for those representatives, all rounded to doubles.
    """
    n = len(zs)
    with mpmath.workdps(MP_DPS):
        z = [mpmath.mpc(v) for v in zs]
        zb = [mpmath.conj(v) for v in z]
        tmat = mpmath.zeros(n, n)
        for s in range(n):
            acc = mpmath.mpc(0)
            for r in range(n):
                if r != s:
                    tmat[r, s] = -1j / (z[r] - z[s])
                    acc += 1j / (z[r] - z[s])
            for r in range(n):
                acc -= 1j / (zb[r] - z[s])
            tmat[s, s] = acc
        kern = [[2j * mpmath.pi / (zb[s] - z[r]) for s in range(n)]
                for r in range(n)]

        def pair(f, g):
            return mpmath.fsum(f[r] * mpmath.conj(g[s]) * kern[r][s]
                               for r in range(n) for s in range(n))

        lam_all, wmat = mpmath.eig(tmat)
        order = sorted(range(n), key=lambda j: mpmath.re(lam_all[j]))
        lam = np.array([float(mpmath.re(lam_all[j])) for j in order])
        cols = []
        for j in order:
            col = [wmat[r, j] for r in range(n)]
            root = mpmath.sqrt(mpmath.re(pair(col, col)))
            cols.append([c / root for c in col])
        mmat = np.empty((n, n), dtype=complex)
        for j in range(n):
            gcol = [z[r] * cols[j][r] for r in range(n)]
            for k in range(n):
                mmat[k, j] = complex(pair(gcol, cols[k]))
        wout = np.column_stack([np.array([complex(c) for c in col])
                                for col in cols])
    return lam, wout, mmat


def _orth_defect(w, kern):
    gram = w.T @ kern @ w.conj()
    return float(np.abs(gram - np.eye(w.shape[1])).max())


def spectral_decompose(params):
    """Eigen-decomposition of L_u restricted to the pure-point subspace.

    The restriction is assembled in the partial-fraction basis (its matrix
    has a closed form and the Gram is a Cauchy kernel), solved densely, and
    polished.  Configurations whose Gram is too ill-conditioned for double
    precision fall back to an extended-precision solve.  Eigenfunctions are
    normalized with the phase fixed so that <u, phi_j> is real positive
    (= sqrt(2 pi |lambda_j|)); the angles and the generator matrix come from
    M_{kj} = <G phi_j, phi_k>, with G acting diagonally on the basis.
    """
    n = params.n
    zs = np.array(params.zs)
    kern = _cauchy_kernel(zs)
    bmat = kern.T.copy()
    bmat = 0.5 * (bmat + bmat.conj().T)
    cond = float(np.linalg.cond(bmat))
    if cond > COND_LIMIT:
        raise GramIllConditioned(f"Gram condition {cond:.3e} exceeds 1e12")

    tmat = lax_matrix(params)
    lam = wmat = mmat_raw = None
    if cond <= FAST_COND_LIMIT:
        lam, wmat = _eig_float(tmat, kern)
        norms = np.sqrt(np.abs(np.einsum("rj,rs,sj->j", wmat, kern,
                                         wmat.conj()).real))
        wmat = wmat / norms[None, :]
        amp = float(np.abs(wmat).max())
        noise_floor = 100 * n * n * 1e-16 * max(1.0, amp * amp)
        if _orth_defect(wmat, kern) > max(1e-10, noise_floor):
            lam = wmat = None
        else:
            mmat_raw = np.empty((n, n), dtype=complex)
            for j in range(n):
                gv = zs * wmat[:, j]  # G is diagonal on this basis
                for k in range(n):
                    mmat_raw[k, j] = gv @ kern @ wmat[:, k].conj()
    if lam is None:
        lam, wmat, mmat_raw = _eig_mp(params.zs)

    if np.any(lam >= 0):
        raise PositivityFailure("Lax operator produced a nonnegative eigenvalue")
    if n > 1 and np.diff(lam).min() <= GAP_TOL * abs(lam[0]):
        raise DegenerateSpectrum(
            f"eigenvalue gap {np.diff(lam).min():.3e} below tolerance")

    u_rat = u_rational(params)
    phis = []
    rots = np.empty(n, dtype=complex)
    for j in range(n):
        v = wmat[:, j]
        phi = PoleResidueForm(tuple((z, 1, v[r]) for r, z in enumerate(zs)))
        pairing = inner_product(u_rat, phi)
        target = np.sqrt(2 * np.pi * abs(lam[j]))
        if abs(pairing) < 1e-10 * target:
            raise PositivityFailure(
                f"<u, phi_{j + 1}> vanished; forbidden for eigenfunctions")
        rots[j] = np.exp(1j * np.angle(pairing))
        phis.append(scale(phi, rots[j]))

    # phase rotation acts on M as a unitary diagonal congruence
    mmat = rots.conj()[:, None] * mmat_raw * rots[None, :]
    gammas = mmat.diagonal().real.copy()

    im_m = (mmat - mmat.conj().T) / 2j
    top = float(np.linalg.eigvalsh(im_m).max())
    if top > IM_M_TOL:
        raise InvariantViolation(f"Im M has positive eigenvalue {top:.3e}")

    return SpectralData(lam, gammas, tuple(phis), mmat, cond)


def m_formula(lambdas, gammas):
    """Closed form of M from eigenvalues and angles.

    Off-diagonal i/(lambda_k - lambda_j) * sqrt(|lambda_k|/|lambda_j|),
    diagonal gamma_j - i/(2 |lambda_j|).
    """
    lam = np.asarray(lambdas, dtype=float)
    gam = np.asarray(gammas, dtype=float)
    n = lam.size
    m = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for j in range(n):
            if j == k:
                m[k, j] = gam[j] - 1j / (2 * abs(lam[j]))
            else:
                m[k, j] = 1j / (lam[k] - lam[j]) * np.sqrt(abs(lam[k]) / abs(lam[j]))
    return m


def verify_m_matrix(sd):
    """Max entrywise deviation between computed M and its closed form."""
    return float(np.abs(sd.m_matrix - m_formula(sd.lambdas, sd.gammas)).max())
