"""Light- and heavy-traffic limit constants by direct quadrature of the limit displays."""
import mpmath as mp

mp.mp.dps = 20


def arc(cdf, a, b):
    return cdf(b) - cdf(a) if a <= b else 1 - cdf(a) + cdf(b)


def limits(alpha, eb, eb2, pk, cdf):
    K = lambda z: sum(p * z**k for k, p in pk.items())
    ek = sum(k * p for k, p in pk.items())
    ekk1 = sum(k * (k - 1) * p for k, p in pk.items())
    kk1 = sum(p * mp.mpf(k) / (k + 1) for k, p in pk.items())
    int_k_cdf = mp.quad(lambda x: K(cdf(x)), [0, 1])
    j = mp.quad(lambda u: mp.quad(lambda x: K(arc(cdf, u, x)), [0, u]) + mp.quad(lambda x: K(arc(cdf, u, x)), [u, 1]), [0, 1])
    tail = mp.quad(lambda u: K(1 - cdf(u)), [0, 1])
    h = alpha + eb2 / (2 * eb) + eb * ekk1 / (2 * ek)
    m = alpha + eb2 / eb + eb * ekk1 / ek
    return {
        "gg_light_s": eb * ek + 1.5 * alpha - alpha * int_k_cdf,
        "gg_light_d": eb * ek + 1.5 * alpha,
        "gg_heavy_s": h * (mp.mpf(0.5) + kk1),
        "gg_heavy_d": 1.5 * h,
        "ex_light_s": ek * eb + alpha - alpha * j,
        "ex_light_d": eb * ek + 1.5 * alpha - alpha * tail,
        "ex_heavy_s": m * kk1,
        "ex_heavy_d": m * (kk1 + mp.mpf(0.5)),
    }


def main():
    out = {}
    for name, args in {
        "s0": (1, 1, 1, {1: 1}, lambda x: x),
        "lin_k2": (1, 1, 1, {2: 1}, lambda x: x / 2 + x * x / 2),
        "k50": (1, 1, 1, {50: 1}, lambda x: x),
    }.items():
        for k, v in limits(*args).items():
            out[name + "_" + k] = v
    return out


if __name__ == "__main__":
    for k, v in main().items():
        print(k, mp.nstr(v, 16))
