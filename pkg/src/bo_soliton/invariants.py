"""Conserved quantities and verification of the symplectic structure.

The symplectic pairing of two tangent fields h1, h2 to the soliton manifold
is (i/2pi) * integral of h1hat(xi) * conj(h2hat(xi)) / xi.  For the
coordinate tangent vectors f_j = du/deta_j and g_j = du/dx_j the Fourier
transforms are explicit on xi > 0, which collapses the pairing to closed
forms in w = (eta_j + eta_k) + i(x_j - x_k):

    omega(f_j, f_k) = -4 pi Im(1/w**2)
    omega(f_j, g_k) = +4 pi Re(1/w**2)
    omega(g_j, g_k) = -4 pi Im(1/w**2)

(The test suite re-derives these against direct numerical xi-integration.)
Finite differences of the coordinate map then verify the canonical bracket
relations {I_j, gamma_k} = delta_jk.
"""

from __future__ import annotations

import numpy as np

from .errors import BoundaryNotDecayed, FDStepTooLarge, PoleProximity
from .profiles import SolitonParameters
from .rational import inner_product
from .spectral import spectral_decompose

FD_STEP_DEFAULT = 1e-5


def _pairing_block(params):
    """Closed-form pairings; returns (ff, fg, gg) as N x N real arrays."""
    xs = params.positions
    etas = params.etas
    w = (etas[:, None] + etas[None, :]) + 1j * (xs[:, None] - xs[None, :])
    inv_w2 = 1.0 / w ** 2
    ff = -4 * np.pi * inv_w2.imag
    fg = 4 * np.pi * inv_w2.real
    gg = -4 * np.pi * inv_w2.imag
    return ff, fg, gg


def omega_matrix(params):
    """2N x 2N pairing matrix in coordinates (x_1, eta_1, ..., x_N, eta_N)."""
    n = params.n
    ff, fg, gg = _pairing_block(params)
    omega = np.zeros((2 * n, 2 * n))
    for j in range(n):
        for k in range(n):
            omega[2 * j, 2 * k] = gg[j, k]
            omega[2 * j, 2 * k + 1] = -fg[k, j]   # omega(g_j, f_k)
            omega[2 * j + 1, 2 * k] = fg[j, k]    # omega(f_j, g_k)
            omega[2 * j + 1, 2 * k + 1] = ff[j, k]
    return omega


def _theta_of(params):
    th = np.empty(2 * params.n)
    th[0::2] = params.positions
    th[1::2] = params.etas
    return th


def _params_of_theta(theta):
    return SolitonParameters.from_x_eta(theta[0::2], theta[1::2])


def _phi_of_theta(theta):
    sd = spectral_decompose(_params_of_theta(theta))
    return np.concatenate([sd.actions, sd.gammas])


def fd_jacobian(params, fd_step):
    """Central-difference Jacobian of (I_1..I_N, gamma_1..gamma_N) in theta."""
    theta = _theta_of(params)
    n2 = theta.size
    jac = np.empty((n2, n2))
    for b in range(n2):
        h = fd_step * (1.0 + abs(theta[b]))
        tp = theta.copy()
        tp[b] += h
        tm = theta.copy()
        tm[b] -= h
        jac[:, b] = (_phi_of_theta(tp) - _phi_of_theta(tm)) / (2 * h)
    return jac


def canonical_form_matrix(n):
    """Matrix of sum dr^j ^ dalpha^j in the (r, alpha) coordinate order."""
    nu = np.zeros((2 * n, 2 * n))
    nu[:n, n:] = np.eye(n)
    nu[n:, :n] = -np.eye(n)
    return nu


def _pullback_defect(params, fd_step):
    jac = fd_jacobian(params, fd_step)
    nu = canonical_form_matrix(params.n)
    return float(np.abs(jac.T @ nu @ jac - omega_matrix(params)).max())


def symplectomorphism_check(params, fd_step=FD_STEP_DEFAULT):
    """Max entry of |J^T nu J - Omega|; the pullback identity in coordinates.

    If the defect looks large the step is halved once; failure to improve
    signals a non-convergent difference quotient rather than a genuine defect.
    """
    defect = _pullback_defect(params, fd_step)
    if defect > 1e-3:
        refined = _pullback_defect(params, fd_step / 2)
        if refined > defect:
            raise FDStepTooLarge(
                f"defect {defect:.3e} did not improve under step halving")
        return refined
    return defect


def poisson_bracket_table(params, fd_step=FD_STEP_DEFAULT):
    """Brackets of all pairs among (I_1..I_N, gamma_1..gamma_N).

    Gradients come from the same finite-difference Jacobian; the Poisson
    matrix is -Omega^{-1}, the orientation that makes {I_1, gamma_1} = +1 in
    the one-soliton closed form.  Expected pattern: [[0, I], [-I, 0]].
    """
    jac = fd_jacobian(params, fd_step)
    pmat = -np.linalg.inv(omega_matrix(params))
    return jac @ pmat @ jac.T


def e_n_from_lambdas(lambdas, n):
    """E_n = sum over j of 2 pi |lambda_j| lambda_j^n."""
    lam = np.asarray(lambdas, dtype=float)
    return float(np.sum(2 * np.pi * np.abs(lam) * lam ** n))


def e_n_from_spectrum(sd, n):
    return e_n_from_lambdas(sd.lambdas, n)


def e1_quadrature(field, periodic=False):
    """E = (1/2) <|D| u, u> - (1/3) integral of u^3 on a uniform grid.

    The first term uses the discrete |k| multiplier on the periodic embedding
    of the grid; the cubic term is a trapezoid sum.  Line profiles must decay
    at the edges unless the field is declared periodic.
    """
    u = field.values
    if not periodic:
        edge = max(abs(u[0]), abs(u[-1]))
        if edge > 1e-6:
            raise BoundaryNotDecayed(
                f"edge magnitude {edge:.3e} exceeds 1e-6")
    n = u.size
    dx = field.dx
    k = 2 * np.pi * np.fft.fftfreq(n, d=dx)
    uhat = np.fft.fft(u)
    # (1/4pi) * sum |k| |dx*uhat|^2 * dk with dk = 2pi/(n dx)
    quad_term = (dx / (2 * n)) * float(np.sum(np.abs(k) * np.abs(uhat) ** 2))
    cubic = float(np.sum(u ** 3) * dx)
    if not periodic:
        cubic -= 0.5 * dx * float(u[0] ** 3 + u[-1] ** 3)
    return quad_term - cubic / 3.0


def h_lambda_from_lambdas(lambdas, lam):
    """Generating function H_lambda = -sum 2 pi lambda_j / (lambda + lambda_j)."""
    lj = np.asarray(lambdas, dtype=float)
    if np.any(np.abs(lam + lj) <= 1e-8):
        raise PoleProximity(f"lambda = {lam} too close to a pole of H")
    return float(-np.sum(2 * np.pi * lj / (lam + lj)))


def h_lambda(sd, lam):
    return h_lambda_from_lambdas(sd.lambdas, lam)


def h_lambda_resolvent(params, lam):
    """H_lambda via the N x N solve (L_u + lambda) f = Pi u on the subspace.

    Works in the partial-fraction basis, where Pi u has coefficient vector
    (i, ..., i) exactly; independent of the eigendecomposition route in
    :func:`h_lambda`.  Ill-conditioned pole clusters rerun the solve in
    extended precision.
    """
    import mpmath

    from .rational import PoleResidueForm
    from .spectral import FAST_COND_LIMIT, _cauchy_kernel, lax_matrix

    n = params.n
    zs = np.array(params.zs)
    kern = _cauchy_kernel(zs)
    tmat = lax_matrix(params)
    rhs = np.full(n, 1j)
    bmat = 0.5 * (kern.T + kern.conj())
    if float(np.linalg.cond(bmat)) <= FAST_COND_LIMIT:
        coeffs = np.linalg.solve(tmat + lam * np.eye(n), rhs)
        f = PoleResidueForm(tuple((z, 1, coeffs[r])
                                  for r, z in enumerate(zs)))
        val = inner_product(f, PoleResidueForm(tuple((z, 1, 1j) for z in zs)))
        return float(val.real)
    with mpmath.workdps(40):
        z = [mpmath.mpc(v) for v in params.zs]
        zb = [mpmath.conj(v) for v in z]
        tm = mpmath.zeros(n, n)
        for s in range(n):
            acc = mpmath.mpc(lam)
            for r in range(n):
                if r != s:
                    tm[r, s] = -1j / (z[r] - z[s])
                    acc += 1j / (z[r] - z[s])
            for r in range(n):
                acc -= 1j / (zb[r] - z[s])
            tm[s, s] = acc
        sol = mpmath.lu_solve(tm, mpmath.matrix([mpmath.mpc(1j)] * n))
        val = mpmath.fsum(
            sol[r] * mpmath.conj(mpmath.mpc(1j)) * 2j * mpmath.pi
            / (zb[s] - z[r])
            for r in range(n) for s in range(n))
        return float(mpmath.re(val))
