"""Regenerate the frozen reference values used by the stats tests.

The sample vectors are produced by the same SplitMix64 + Box-Muller stream as
tests/test_support.hpp, so both sides see bit-identical inputs. scipy is the
independent reference implementation.

    python3 tests/reference/make_reference_values.py
"""
import math

from scipy import stats

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self):
        return (self.next() >> 11) * 2.0**-53

    def normal(self):
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def normals(seed, n, mean=0.0, sd=1.0):
    g = SplitMix64(seed)
    return [mean + sd * g.normal() for _ in range(n)]


def uniforms(seed, n):
    g = SplitMix64(seed)
    return [g.uniform() for _ in range(n)]


def lognormals(seed, n):
    return [math.exp(v) for v in normals(seed, n)]


WEIGHTS = [148, 154, 158, 160, 161, 162, 166, 170, 182, 195, 236]

shapiro_cases = {
    "men_weights": WEIGHTS,
    "normal_20_seed1": normals(1, 20),
    "normal_50_seed2": normals(2, 50, 10.0, 3.0),
    "uniform_500_seed3": uniforms(3, 500),
    "lognormal_30_seed4": lognormals(4, 30),
    "normal_7_seed5": normals(5, 7),
    "normal_5000_seed8": normals(8, 5000),
    "small_4": [1.0, 2.0, 4.0, 8.0],
}

levene_cases = {
    "hand": ([1, 2, 3, 4], [-10, 0, 10, 20]),
    "normal_10_11": (normals(11, 10), normals(12, 11)),
    "sd1_vs_sd3": (normals(13, 15), normals(14, 20, 0.0, 3.0)),
    "uniform_vs_lognormal": (uniforms(15, 30), lognormals(16, 25)),
    "ties": ([1, 1, 2, 2, 3, 5], [2, 2, 2, 4, 4, 9, 9]),
}

for name, x in shapiro_cases.items():
    w, p = stats.shapiro(x)
    print(f"shapiro {name}: W={w:.10f} p={p:.10g}")
for name, (a, b) in levene_cases.items():
    f, p = stats.levene(a, b, center="mean")
    print(f"levene {name}: F={f:.10g} p={p:.10g}")

# Rank-sum: normal approximation vs exact p at n1 = n2 = 30.
a = normals(21, 30)
b = normals(22, 30, 0.6)
print("mwu_exact_30", stats.mannwhitneyu(a, b, method="exact").pvalue)
print("mwu_asym_30", stats.mannwhitneyu(a, b, method="asymptotic", use_continuity=True).pvalue)

# Screening routes for the automatic comparison and correlation.
for name, (x, y) in {
    "equal_var_gauss": (normals(31, 20, 5.0), normals(32, 20, 5.5)),
    "skewed": (normals(33, 20), lognormals(34, 20)),
}.items():
    print(name, "sw", stats.shapiro(x).pvalue, stats.shapiro(y).pvalue, "levene", stats.levene(x, y, center="mean").pvalue)

# t test / correlation spot values.
x, y = normals(41, 25), normals(42, 25)
print("ttest", stats.ttest_ind(x, y))
print("pearson", stats.pearsonr(x, y))
print("spearman", stats.spearmanr(x, y))
