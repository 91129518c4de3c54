"""Normalising a random 4-CNF to slim form and inspecting its moments."""

from cnfmoments import GenSpec, enumerate_distribution, generate, moments, normalize, slim_stats

f = generate(GenSpec(10, 25, (3, 4), seed=3))
res = normalize(f)
out = res.formula
print(f"input: n={f.n} m={f.m}; output: n={out.n} m={out.m}")
print("units fixed:", res.log["units"], " pure:", res.log["pure"])
print("clauses split:", len(res.log["splits"]), " variables copied:", len(res.log["copies"]))
print("count preserving:", res.count_preserving)

s = slim_stats(out)
print(f"m2={s.m2} m3={s.m3} n2={s.n2} n3={s.n3}  E(u)={moments(out).mean}")
print("satisfiable before:", enumerate_distribution(f).counts[0] > 0)
if out.n <= 24:
    print("satisfiable after: ", enumerate_distribution(out).counts[0] > 0)
