# Truncated free algebra and the Magnus embedding, step by step.
# Run: python3 notebooks/01_free_algebra_and_magnus.py
from gstower import TruncatedSeries, magnus_expand, parse_word, depth

d, N, p = 2, 6, 3

# generators of F_3<<u, v>> modulo degree > 6
u = TruncatedSeries.generator(0, d, N, p)
v = TruncatedSeries.generator(1, d, N, p)
one = TruncatedSeries.one(d, N, p)

print("u*v - v*u :", u * v - v * u)
# 1 + u is a unit; its inverse is the alternating geometric series
print("(1+u)^-1  :", (one + u).inverse())

# a letter a maps to 1 + u_0, so a^3 = 1 + u_0^3 in characteristic 3
names = ["a", "b"]
for text in ["a", "a^3", "[a,b]", "[a,[a,b]]", "a^9", "[a,b]^3"]:
    w = parse_word(text, names)
    print(f"{text:>10}  depth {depth(w, d, N, p)}")

# the commutator starts with u_0 u_1 - u_1 u_0 in degree 2
m = magnus_expand(parse_word("[a,b]", names), d, 3, p)
print("[a,b] ->", m)
