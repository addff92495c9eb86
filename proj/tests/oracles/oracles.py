"""Independent reference values for the C++ tests.

Run from the repository root:  python3 tests/oracles/oracles.py > tests/oracle_values.hpp
Values come from mpmath at 40 digits and numpy's FFT; nothing here calls
the library.
"""
import mpmath as mp
import numpy as np

mp.mp.dps = 40
pi = mp.pi


def lattice_sum(d, s):
    # sum_{k != 0} |k|_inf^{-2s} = sum_j ((2j+1)^d - (2j-1)^d) j^{-2s}
    return mp.nsum(lambda j: ((2 * j + 1) ** d - (2 * j - 1) ** d) / j ** (2 * s), [1, mp.inf])


def lower_bound(n, N, K, s, B):
    c = mp.mpf(B) ** 2 / (3 * (s + 1))
    return c * (mp.mpf(1) / (8 * n) + mp.mpf(1) / mp.mpf(N) ** (2 * s) + mp.mpf(2) / mp.mpf(K + 2) ** (2 * s))


def field(shape):
    # Deterministic test field: u[j] = sin(1 + sum_k (k+2) j_k^2)
    idx = np.indices(shape)
    arg = 1.0 + sum((k + 2) * idx[k] ** 2 for k in range(len(shape)))
    return np.sin(arg)


values = {
    "kSpectralStdD1M1": 10 / (4 * pi ** 2 + 1),
    "kHeatD1M1Tau1": mp.e ** (-4 * pi ** 2),
    "kSobolevPhi1S1": 1 + (2 * pi) ** 2,
    "kLatticeD1S1": lattice_sum(1, 1),
    "kLatticeD2S2": lattice_sum(2, 2),
    "kLatticeD3S2": lattice_sum(3, 2),
    "kLowerBound_4_8_2_1_1": lower_bound(4, 8, 2, 1, 1),
    "kNoiseStdD1M1": (4 * pi ** 2 + 1) ** mp.mpf(-1.5),
}

print("#pragma once")
print()
print("// Generated by tests/oracles/oracles.py; do not edit.")
print()

print()
print("namespace oracle {")
print()
for name, v in values.items():
    print(f"inline constexpr double {name} = {mp.nstr(v, 20)};")
print()

# DFT coefficients, coeff(m) = N^-d sum_x u(x) e^{-2 pi i <m, x>}, of the test field.
for shape, modes in [((8,), [(0,), (1,), (-3,), (4,)]), ((6, 6), [(0, 0), (1, -2), (-2, 3), (-1, 1)])]:
    u = field(shape)
    c = np.fft.fftn(u) / u.size
    tag = "x".join(str(n) for n in shape)
    print(f"// Test field sin(1 + sum_k (k+2) j_k^2) on a {tag} grid.")
    print(f"struct DftCase{tag.replace('x', '_')} {{ int mode[{len(shape)}]; double re, im; }};")
    print(f"inline constexpr DftCase{tag.replace('x', '_')} kDft{tag.replace('x', '_')}[] = {{")
    for m in modes:
        idx = tuple(mi % n for mi, n in zip(m, shape))
        z = c[idx]
        print(f"    {{{{{', '.join(map(str, m))}}}, {z.real:.17g}, {z.imag:.17g}}},")
    print("};")
    print()
print("}  // namespace oracle")
