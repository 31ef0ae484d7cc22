"""Pure-numpy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable, and as the
reference the compiled versions are benchmarked and tested against.
"""
import numpy as np

FORM_ONE_PLUS_ABS = 0
FORM_ONE_PLUS_SQ_HALF = 1


def thomas_batched(lower, diag, upper, rhs):
    """Solve a batch of tridiagonal systems.

    All arguments have shape (m, n); row ``k`` of each describes one system.
    ``lower[:, 0]`` and ``upper[:, -1]`` are ignored.
    """
    lower = np.asarray(lower, dtype=np.float64)
    diag = np.asarray(diag, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    m, n = rhs.shape
    cp = np.empty((m, n))
    dp = np.empty((m, n))
    cp[:, 0] = upper[:, 0] / diag[:, 0]
    dp[:, 0] = rhs[:, 0] / diag[:, 0]
    for i in range(1, n):
        denom = diag[:, i] - lower[:, i] * cp[:, i - 1]
        cp[:, i] = upper[:, i] / denom
        dp[:, i] = (rhs[:, i] - lower[:, i] * dp[:, i - 1]) / denom
    x = np.empty((m, n))
    x[:, -1] = dp[:, -1]
    for i in range(n - 2, -1, -1):
        x[:, i] = dp[:, i] - cp[:, i] * x[:, i + 1]
    return x


def _log_base(rho, form):
    if form == FORM_ONE_PLUS_ABS:
        return np.log1p(rho)
    return 0.5 * np.log1p(rho * rho)


def log_mean_powers(centers, halves, n_per_axis, gamma, form, exponents):
    """Log of the midpoint-rule mean of ``base(rho)**(-gamma*p)`` over cells.

    ``centers`` is (m, dim) and ``halves`` (m,) describes axis-aligned cubes;
    ``rho`` is the Euclidean norm of the sample point.  Returns (m, k) for the
    k entries of ``exponents``.  Computed in log space so large exponents do
    not overflow.
    """
    centers = np.asarray(centers, dtype=np.float64)
    halves = np.asarray(halves, dtype=np.float64)
    exponents = np.asarray(exponents, dtype=np.float64)
    m, dim = centers.shape
    g = (np.arange(n_per_axis) + 0.5) / n_per_axis * 2.0 - 1.0
    offsets = np.stack(np.meshgrid(*([g] * dim), indexing="ij"), -1).reshape(-1, dim)
    ns = offsets.shape[0]
    out = np.empty((m, exponents.size))
    chunk = max(1, 2_000_000 // ns)
    for s in range(0, m, chunk):
        c = centers[s:s + chunk]
        h = halves[s:s + chunk]
        pts = c[:, None, :] + h[:, None, None] * offsets[None]
        lb = _log_base(np.sqrt(np.einsum("ijk,ijk->ij", pts, pts)), form)
        for k, p in enumerate(exponents):
            lv = -gamma * p * lb
            top = lv.max(axis=1)
            out[s:s + chunk, k] = top + np.log(np.exp(lv - top[:, None]).sum(axis=1) / ns)
    return out


def _minmod(a, b):
    return np.where(a * b > 0.0, np.where(np.abs(a) < np.abs(b), a, b), 0.0)


def muscl_tendency(eta, flux_r, flux_z, r_c, dr, dz):
    """Flux-form advection tendency ``-div(u eta)`` on the (r, z) grid.

    ``flux_r`` (n_r+1, n_z) holds ``r*u_r`` on radial faces at r = f*dr;
    ``flux_z`` (n_r, n_z) holds ``u_z`` on the axial face above each cell
    (z periodic).  Face values of eta use a minmod-limited upwind
    reconstruction.  Axis: eta even; outer face: eta = 0.
    """
    eta = np.asarray(eta, dtype=np.float64)
    n_r, n_z = eta.shape
    # radial direction, ghost cells: one even reflection at the axis, two odd at R
    ext = np.empty((n_r + 4, n_z))
    ext[2:-2] = eta
    ext[1] = eta[0]
    ext[0] = eta[1]
    ext[-2] = -eta[-1]
    ext[-1] = -eta[-2]
    d = np.diff(ext, axis=0)  # d[k] = ext[k+1]-ext[k]
    slope = _minmod(d[:-1], d[1:])  # slope for ext[1..n_r+2]
    # face f (0..n_r) sits between ext cells f+1 and f+2
    left = ext[1:n_r + 2] + 0.5 * slope[0:n_r + 1]
    right = ext[2:n_r + 3] - 0.5 * slope[1:n_r + 2]
    face = np.where(flux_r > 0.0, left, right)
    face[-1] = 0.0
    fr = flux_r * face
    fr[0] = 0.0
    # axial direction, periodic; face j sits between cells j and j+1
    dz_f = np.roll(eta, -1, axis=1) - eta
    sl = _minmod(np.roll(dz_f, 1, axis=1), dz_f)
    lft = eta + 0.5 * sl
    rgt = np.roll(eta - 0.5 * sl, -1, axis=1)
    fz = flux_z * np.where(flux_z > 0.0, lft, rgt)
    div = (fr[1:] - fr[:-1]) / (r_c[:, None] * dr) + (fz - np.roll(fz, 1, axis=1)) / dz
    return -div
