"""Computational checks for Br(Y0(2)), the stack of elliptic curves with a 2-torsion subgroup.

The package is organised bottom-up:

* ``intlinalg``   exact integer linear algebra (Smith normal form and friends)
* ``cohomology``  cohomology of finite cyclic groups
* ``padic``       arithmetic in Z_p[zeta_p] and Hilbert symbols
* ``fields``      small finite fields and residue rings
* ``moduli``      Legendre family maps and Weierstrass models
* ``witness``     certificates for local symbol witnesses
* ``assembly``    abelian group expressions and the final formulas
* ``cli``         batch verification harness
"""

__version__ = "0.1.0"
