"""Numba kernels for the joint-space integrators and the diagonal SRE.

Every operator in the model (a, a†, b, b†, their number operators and the
quadrature a+a†) is a shift or a diagonal in the Fock basis, so applying the
full generator to rho is a local stencil on the flattened joint index
x = i*mech_dim + n.  The fused kernels below evaluate one generator
application (or one Euler-Maruyama step) in a single pass instead of a
sequence of dense matrix products; this is what makes the wide non-adiabatic
regimes tractable.

Truncation conventions match dense matrix algebra with truncated ladder
operators exactly: the only place this shows is the diagonal of b b†, whose
top entry is 0 on the truncated space (array ``cup``).  Internal arithmetic
is float64 even when rho is stored as complex64.
"""

import numpy as np
from numba import njit, prange


def ladder_tables(cavity_dim: int, mech_dim: int):
    """Precomputed sqrt tables and index decode tables for the kernels."""
    sc = np.sqrt(np.arange(cavity_dim + 1, dtype=np.float64))
    sm = np.sqrt(np.arange(mech_dim + 1, dtype=np.float64))
    cup = np.arange(1.0, mech_dim + 1.0)
    cup[mech_dim - 1] = 0.0  # diag of truncated b b†
    d = cavity_dim * mech_dim
    itab = (np.arange(d) // mech_dim).astype(np.int64)
    ntab = (np.arange(d) % mech_dim).astype(np.int64)
    return sc, sm, cup, itab, ntab


@njit(cache=True)
def joint_stats(rho, dm, sc):
    """Trace, Tr(a rho) and phonon moments of a flattened joint state.

    Returns (tr, re_a, im_a, sum_n, sum_n2) with the moment sums
    unnormalized (divide by tr).
    """
    d = rho.shape[0]
    tr = 0.0
    re_a = 0.0
    im_a = 0.0
    sum_n = 0.0
    sum_n2 = 0.0
    for x in range(d):
        p = rho[x, x].real
        tr += p
        n = x % dm
        sum_n += n * p
        sum_n2 += n * n * p
        if x + dm < d:
            v = rho[x + dm, x]  # (a rho) diagonal element / sc
            s = sc[x // dm + 1]
            re_a += s * v.real
            im_a += s * v.imag
    return tr, re_a, im_a, sum_n, sum_n2


@njit(cache=True)
def edge_populations(rho, dc, dm):
    """(top cavity level population, top mech level population), unnormalized."""
    cav = 0.0
    mech = 0.0
    for n in range(dm):
        x = (dc - 1) * dm + n
        cav += rho[x, x].real
    for i in range(dc):
        x = i * dm + (dm - 1)
        mech += rho[x, x].real
    return cav, mech


@njit(cache=True, parallel=True)
def apply_generator(rho, out, dc, dm, itab, ntab, sc, sm, cup,
                    chi, kappa, g_dn, g_up, base, a_det, a_meas, q):
    """out = base*rho + a_det*L(rho) + a_meas*(M0(rho) - q*rho).

    L is the full Lindblad generator (interaction Hamiltonian, cavity decay
    kappa D[a], thermal mechanics g_dn D[b] + g_up D[b†]); M0 is the linear
    part of the homodyne innovation for the phase quadrature, (-ia)rho +
    rho(ia†), and q should equal Tr(M0)/Tr(rho).  Only the upper triangle is
    computed; the lower is its mirror image, so the output is hermitian by
    construction.  Writes are disjoint across rows, hence safe under prange.
    """
    d = dc * dm
    half_chi = 0.5 * chi
    for x in prange(d):
        i = itab[x]
        n = ntab[x]
        for y in range(x, d):
            j = itab[y]
            m = ntab[y]
            v = rho[x, y]
            # commutator: -i(chi/2) [ n*(X rho) - m*(rho X) ], X = a + a†
            zr = 0.0
            zi = 0.0
            if n != 0:
                if i + 1 < dc:
                    w = rho[x + dm, y]
                    zr += n * sc[i + 1] * w.real
                    zi += n * sc[i + 1] * w.imag
                if i > 0:
                    w = rho[x - dm, y]
                    zr += n * sc[i] * w.real
                    zi += n * sc[i] * w.imag
            if m != 0:
                if j + 1 < dc:
                    w = rho[x, y + dm]
                    zr -= m * sc[j + 1] * w.real
                    zi -= m * sc[j + 1] * w.imag
                if j > 0:
                    w = rho[x, y - dm]
                    zr -= m * sc[j] * w.real
                    zi -= m * sc[j] * w.imag
            acc_r = half_chi * zi  # multiply (zr + i zi) by -i(chi/2)
            acc_i = -half_chi * zr
            # kappa D[a]: a rho a† shifts both cavity indices down
            if i + 1 < dc and j + 1 < dc:
                w = rho[x + dm, y + dm]
                c = kappa * sc[i + 1] * sc[j + 1]
                acc_r += c * w.real
                acc_i += c * w.imag
            # g_dn D[b]
            if n + 1 < dm and m + 1 < dm:
                w = rho[x + 1, y + 1]
                c = g_dn * sm[n + 1] * sm[m + 1]
                acc_r += c * w.real
                acc_i += c * w.imag
            # g_up D[b†]
            if n > 0 and m > 0:
                w = rho[x - 1, y - 1]
                c = g_up * sm[n] * sm[m]
                acc_r += c * w.real
                acc_i += c * w.imag
            # all anticommutator diagonals at once
            c = -0.5 * (kappa * (i + j) + g_dn * (n + m)
                        + g_up * (cup[n] + cup[m]))
            acc_r += c * v.real
            acc_i += c * v.imag

            nr = base * v.real + a_det * acc_r
            ni = base * v.imag + a_det * acc_i
            if a_meas != 0.0:
                # (-ia) rho + rho (ia†) - q rho
                mr = -q * v.real
                mi = -q * v.imag
                if i + 1 < dc:
                    w = rho[x + dm, y]
                    mr += sc[i + 1] * w.imag
                    mi -= sc[i + 1] * w.real
                if j + 1 < dc:
                    w = rho[x, y + dm]
                    mr -= sc[j + 1] * w.imag
                    mi += sc[j + 1] * w.real
                nr += a_meas * mr
                ni += a_meas * mi
            out[x, y] = complex(nr, ni)
            if x != y:
                out[y, x] = complex(nr, -ni)


@njit(cache=True)
def sre_run(p, work, dW, a_up, a_dn, meas, det_gain, noise_gain, dt,
            sample_every, clamp_limit, mean_out, var_out, ih_out, dw_out,
            clamp_out, topflux_out):
    """Integrate the diagonal stochastic rate equation over len(dW) steps.

    p is the initial distribution (overwritten with the final one), work a
    scratch buffer of the same size.  a_up[n] = gamma*nbar*(n+1) is the
    upward thermal outflow rate from level n (dropped at the top level and
    accumulated into topflux_out), a_dn[n] = gamma*(nbar+1)*n the downward
    one.  meas = 2*sqrt(eta*Gamma).  The photocurrent per step is
    det_gain*<n> + noise_gain*dW/dt with <n> taken at the step start; the
    outputs hold per-bin averages (photocurrent) and bin sums (dW, clamped
    mass, dropped top flux), with the distribution moments at bin ends.

    Returns (status, step): status 0 = ok, 1 = clamped mass above
    clamp_limit in one step, 2 = non-finite values.
    """
    nl = p.shape[0]
    top = nl - 1
    n_steps = dW.shape[0]
    bin_ih = 0.0
    bin_dw = 0.0
    bin_clamp = 0.0
    bin_flux = 0.0
    for k in range(n_steps):
        mean = 0.0
        for n in range(nl):
            mean += n * p[n]
        dw = dW[k]
        bin_ih += det_gain * mean + noise_gain * dw / dt
        bin_dw += dw
        bin_flux += a_up[top] * p[top] * dt
        clamped = 0.0
        total = 0.0
        for n in range(nl):
            drift = -a_dn[n] * p[n]
            if n < top:
                drift -= a_up[n] * p[n]
            if n > 0:
                drift += a_up[n - 1] * p[n - 1]
            if n < top:
                drift += a_dn[n + 1] * p[n + 1]
            v = p[n] + drift * dt - meas * (n - mean) * p[n] * dw
            if v < 0.0:
                clamped -= v
                v = 0.0
            work[n] = v
            total += v
        bin_clamp += clamped
        if clamped > clamp_limit:
            return 1, k
        if not (total > 0.0) or not np.isfinite(total):
            return 2, k
        inv = 1.0 / total
        for n in range(nl):
            p[n] = work[n] * inv
        if (k + 1) % sample_every == 0:
            idx = (k + 1) // sample_every - 1
            m1 = 0.0
            for n in range(nl):
                m1 += n * p[n]
            m2 = 0.0
            for n in range(nl):
                m2 += (n - m1) * (n - m1) * p[n]
            mean_out[idx] = m1
            var_out[idx] = m2
            ih_out[idx] = bin_ih / sample_every
            dw_out[idx] = bin_dw
            clamp_out[idx] = bin_clamp
            topflux_out[idx] = bin_flux
            bin_ih = 0.0
            bin_dw = 0.0
            bin_clamp = 0.0
            bin_flux = 0.0
    return 0, n_steps
