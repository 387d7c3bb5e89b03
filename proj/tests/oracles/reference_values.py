"""Independent high-precision oracle for the frozen constants used in the C++ tests.

Everything here is evaluated from the defining integrals / closed forms with
mpmath at 30 digits; nothing calls into the library under test.
Run: python3 tests/oracles/reference_values.py
"""
import mpmath as mp

mp.mp.dps = 30

S, WC, BETA = mp.mpf("0.01"), mp.mpf(1), mp.mpf(2)
W1, W2, W3, V12 = mp.mpf("0.5"), mp.mpf(1), mp.mpf(0), mp.mpf("0.3")


def J(nu):
    return S * nu * mp.e ** (-nu / WC)


def nbose(nu):
    return 1 / mp.expm1(BETA * nu)


def coth_weight(nu):
    # J(nu) (1 + 2 n(nu)) with the nu -> 0 limit 2 s / beta
    if nu == 0:
        return 2 * S / BETA
    return J(nu) * mp.coth(BETA * nu / 2)


def D1(tau):
    f = lambda nu: 2 * coth_weight(nu) * mp.cos(nu * tau)
    return mp.quad(f, mp.linspace(0, 60, 121) + [mp.inf])


def D2(tau):
    f = lambda nu: 2 * J(nu) * mp.sin(nu * tau)
    return mp.quad(f, mp.linspace(0, 60, 121) + [mp.inf])


def _ramp(x, t):
    # int_0^t exp(i x tau) dtau
    if x == 0:
        return mp.mpf(t)
    return (mp.expj(x * t) - 1) / (1j * x)


def phi_finite(mu, t):
    # (D1 - i D2)/2 = int J(nu) [(1 + n) e^{-i nu tau} + n e^{i nu tau}] dnu; the tau integral is done exactly
    def f(nu):
        if nu == 0:
            return S / BETA * 2 * _ramp(mu, t)
        return J(nu) * ((1 + nbose(nu)) * _ramp(mu - nu, t) + nbose(nu) * _ramp(mu + nu, t))
    return mp.quad(f, mp.linspace(0, 80, 321) + [mp.inf])


def phi_markov_im(mu):
    # principal value via the contour-free symmetric split done in mpmath
    a = abs(mu)
    def reg(nu):
        return J(nu) * (nbose(nu) / (nu + mu) - (1 + nbose(nu)) / (nu - mu))
    # singular integrand h(nu)/(nu-a); subtract h(a)/(nu-a) and add analytic PV of the pole
    if mu > 0:
        h = lambda nu: -J(nu) * (1 + nbose(nu))
        other = lambda nu: J(nu) * nbose(nu) / (nu + mu)
    else:
        h = lambda nu: J(nu) * nbose(nu)
        other = lambda nu: -J(nu) * (1 + nbose(nu)) / (nu - mu)
    top = mp.mpf(200)
    smooth = lambda nu: (h(nu) - h(a)) / (nu - a) if nu != a else mp.diff(h, a)
    val = mp.quad(smooth, [0, a, 2 * a, 10, top]) + h(a) * mp.log((top - a) / a)
    val += mp.quad(other, [0, a, 10, top])
    return val


def main():
    print("J(1)", J(1), "J(2)", J(2))
    print("n(beta=2, nu=1)", nbose(1))
    print("trigamma(3/2)", mp.psi(1, mp.mpf(3) / 2))
    for tau in [0, 0.5, 1, 5, 20]:
        print("D1", tau, D1(tau), "closed", 2 * S * (-WC**2 * ((WC*tau)**2 - 1) / (1 + (WC*tau)**2)**2
              + 2 / BETA**2 * mp.re(mp.psi(1, (BETA*WC + 1j*WC*tau + 1) / (BETA*WC)))), "D2", D2(tau))
    Dm = mp.sqrt((W1 - W2) ** 2 + 4 * V12**2)
    l1 = (W1 + W2 + Dm) / 2
    l2 = (W1 + W2 - Dm) / 2
    print("Dm", Dm, "l1", l1, "l2", l2, "sin2", (1 - (W1 - W2) / Dm) / 2)
    pops = [mp.e ** (-BETA * l) for l in (l1, l2, W3)]
    Z = sum(pops)
    pops = [p / Z for p in pops]
    s2 = (1 - (W1 - W2) / Dm) / 2
    print("gibbs eigen", pops)
    print("gibbs site", pops[0] * (1 - s2) + pops[1] * s2, pops[0] * s2 + pops[1] * (1 - s2), pops[2])
    ZL = 2 * mp.e ** (-BETA * W2) + mp.e ** (-BETA * W3)
    print("LA", mp.e ** (-BETA * W2) / ZL, mp.e ** (-BETA * W3) / ZL)
    print("RePhiInf(1)", mp.pi * J(1) * (1 + nbose(1)))
    for mu in [l2, -l2, l1, -l1]:
        print("ImPhiInf", mu, phi_markov_im(mu))
    for mu in [l2, -l1]:
        for t in [1, 5, 20]:
            print("PhiFinite", mu, t, phi_finite(mu, t))


if __name__ == "__main__":
    main()
