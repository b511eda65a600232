"""Reference values frozen into the unit tests (mpmath, 20 digits)."""
from mpmath import mp, mpf, besseli, exp, sqrt, pi, loggamma, hyp2f1, quad, sin, inf, rgamma, invertlaplace, linspace

mp.dps = 20


def bessel_i_scaled(nu, z):
    return exp(-z) * besseli(nu, z)


def p2(zeta, t, r, s):
    return (r * s) ** (mpf(1) / 2 - zeta) / (2 * t) * exp(-(r * r + s * s) / (4 * t)) * besseli(zeta - mpf(1) / 2, r * s / (2 * t))


def sigma1_talbot(beta, tau):
    # Numerical Laplace inversion of exp(-p^beta); independent of the representations below.
    return invertlaplace(lambda p: exp(-p ** beta), tau, method="talbot")


def sigma1(beta, tau):
    # Kanter's representation differentiated in x: P(S <= x) = (1/pi) int exp(-A(u) x^{-g}) du.
    if beta == mpf(1) / 2:
        return tau ** (-mpf(3) / 2) * exp(-1 / (4 * tau)) / (2 * sqrt(pi))
    g = beta / (1 - beta)
    A = lambda u: sin(beta * u) ** g * sin((1 - beta) * u) / sin(u) ** (1 / (1 - beta))
    f = lambda u: A(u) * exp(-A(u) * tau ** (-g))
    return g * tau ** (-g - 1) * quad(f, linspace(0, pi, 9)) / pi


def sigma(beta, t, tau):
    f = t ** (-1 / mpf(beta))
    return f * sigma1(beta, tau * f)


def p_alpha(zeta, alpha, t, r, s):
    beta = mpf(alpha) / 2
    f = lambda tau: p2(zeta, tau, r, s) * sigma(beta, t, tau)
    return quad(f, [0, mpf(1) / 10, 1, 10, 100, inf])


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


if __name__ == "__main__":
    show("lgamma(0.5)", loggamma(mpf(1) / 2))
    for nu, z in [(0.75, 200), (0.3, 5), (-0.4, 0.01), (2.5, 40), (0, 34.9), (0, 35.1), (5.5, 60.4), (5.5, 60.6), (0.2, 1e4)]:
        show(f"bessel_i_scaled({nu}, {z})", bessel_i_scaled(mpf(nu), mpf(z)))
    for a, b, c, z in [(1, 1.5, 0.5, 0.5), (0.5, 1.25, 1.5, 0.9), (1, 1, 2, 0.99), (2, 3, 5.5, 0.999), (1.5, 2, 2.5, 0.97), (0.75, 1.25, 1.5, 0.999999)]:
        show(f"2F1reg({a},{b},{c},{z})", hyp2f1(mpf(a), mpf(b), mpf(c), mpf(z)) * rgamma(mpf(c)))
    for beta, tau in [(0.75, 1), (0.3, 0.5), (0.9, 3), (0.25, 20)]:
        show(f"sigma1({beta}, {tau})", sigma1(mpf(beta), mpf(tau)))
        show("  talbot", sigma1_talbot(mpf(beta), mpf(tau)))
    show("p2(0.3,1,1,2)", p2(mpf(3) / 10, 1, 1, 2))
    show("p2(1,0.5,2,3)", p2(1, mpf(1) / 2, 2, 3))
    show("p2(1,1,1,1)", p2(1, 1, 1, 1))
    show("p2(3,0.01,50,50.1)", p2(3, mpf(1) / 100, 50, mpf(501) / 10))
    show("p_alpha(0.5,1,1,1,1)", p_alpha(mpf(1) / 2, 1, 1, 1, 1))
    show("p_alpha(2.5,1,0.3,0.7,2)", p_alpha(mpf(5) / 2, 1, mpf(3) / 10, mpf(7) / 10, 2))
    show("p_alpha(0.5,1.5,1,2,0.3)", p_alpha(mpf(1) / 2, mpf(3) / 2, 1, 2, mpf(3) / 10))
    show("p_alpha(-0.3,0.5,2,1,3)", p_alpha(-mpf(3) / 10, mpf(1) / 2, 2, 1, 3))
    show("p_alpha(1,1.5,1,2,0.3)", p_alpha(1, mpf(3) / 2, 1, 2, mpf(3) / 10))
