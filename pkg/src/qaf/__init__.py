"""Compile Boolean circuits to Ising models and anneal them.

Modules: :mod:`qaf.ising` (models, energies, clamping), :mod:`qaf.gadgets`
(NOR and wire penalty gadgets), :mod:`qaf.netlist` (NOR circuits and
generators), :mod:`qaf.compiler` (circuit to hardware-shaped model),
:mod:`qaf.solvers` (exact, SA, SQA), :mod:`qaf.factoring` and :mod:`qaf.cli`.
"""
