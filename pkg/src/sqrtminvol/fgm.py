"""Accelerated projected gradient descent with monotone restarts.

One engine serves every block subproblem in the package (H given W,
W given H, and the coefficient refits inside the initializer).  The
momentum sequence is the usual fast-gradient one; whenever an
extrapolated step would increase the objective the momentum is dropped
and a plain projected step is taken instead, so the objective never
increases across iterations.
"""

import math

__all__ = ["minimize_fgm"]

# Guards against a Lipschitz estimate that came out slightly small; each
# retry halves the step, so 60 halvings cover any double-precision gap.
_MAX_STEP_HALVINGS = 60


def minimize_fgm(x0, objective, gradient, project, L, iters, tol):
    """Minimize ``objective`` over the set encoded by ``project``.

    Parameters
    ----------
    x0 : ndarray
        Feasible starting point.
    objective, gradient : callable
        Smooth objective and its gradient, both taking one array.
    project : callable
        Euclidean projection onto the feasible set.
    L : float
        Gradient Lipschitz constant; the step is 1/L.  Non-positive L
        means the gradient is identically zero and x0 is returned.
    iters : int
        Iteration budget.
    tol : float
        Stop once the per-iteration relative objective decrease falls
        below this.

    Returns
    -------
    (x, fx) : ndarray, float
        Final iterate and objective value, with fx <= objective(x0).
    """
    fx = objective(x0)
    if L <= 0.0:
        return x0, fx
    x = x0
    y = x0
    t = 1.0
    step = 1.0 / L
    for _ in range(int(iters)):
        xn = project(y - step * gradient(y))
        fn = objective(xn)
        if fn > fx:
            # Momentum overshot; retry as plain projected gradient.
            g = gradient(x)
            xn = project(x - step * g)
            fn = objective(xn)
            halvings = 0
            while fn > fx and halvings < _MAX_STEP_HALVINGS:
                # A power-iteration Lipschitz estimate can undershoot
                # when its start vector is nearly orthogonal to the top
                # singular direction; shrinking the step restores the
                # descent guarantee.
                step *= 0.5
                xn = project(x - step * g)
                fn = objective(xn)
                halvings += 1
            if fn > fx:
                return x, fx
            t = 1.0
        done = (fx - fn) <= tol * max(abs(fx), 1e-300)
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        y = xn + ((t - 1.0) / t_next) * (xn - x)
        x, fx, t = xn, fn, t_next
        if done:
            break
    return x, fx
