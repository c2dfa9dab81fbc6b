"""Exact HOMFLY-PT state sums, a deformed braidlike polynomial, and
triply-graded link homology for classical and virtual link diagrams.

The package is organized in layers:

* :mod:`linkhom.algebra` -- Laurent polynomials, rational functions and
  truncated triple-graded series over the integers.
* :mod:`linkhom.diagram` -- braid words, oriented planar diagrams, their
  parsers, closures, crossing resolutions and local pattern surgery.
* :mod:`linkhom.moy` -- trivalent-graph evaluation, the state-sum link
  polynomial, its deformed variant for diagrams with virtual crossings,
  and an independent skein-relation oracle.
* :mod:`linkhom.koszul` -- Koszul complexes of marked graphs, gluing,
  mark removal, graded homology and twisted-complex machinery.
* :mod:`linkhom.homology` -- crossing bicomplexes and the triply-graded
  homology of closed diagrams, with decategorification checks.
* :mod:`linkhom.cli` -- the ``linkhom`` command-line front end.
"""

__version__ = "0.1.0"
