"""Constructive period/index certificates for genus one curves.

Subpackages, roughly bottom-up:

  cyclo      exact prime-power cyclotomic arithmetic
  localfield places, local valuations, tame symbols over Q(zeta_n)
  ecq        elliptic curves over Q and over the cyclotomic coefficient field
  kummer     torsion bases, pairings, Kummer coordinates, obstruction reads
  sieve      prime/generator sieve producing admissible class data
  construct  end-to-end certificate construction and verification
  cli        command line front end
"""

__version__ = "0.1.0"
