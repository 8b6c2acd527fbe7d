"""
k3calc
======
Exact intersection-theoretic calculus for curve configurations on rational
surfaces, their birational modifications, cyclic quotient points and the
canonical resolution of double covers branched along disjoint smooth curves.
"""
