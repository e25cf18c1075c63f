"""conelab: cones, doubled warped products, holonomy algebras and stabiliser cohomology."""

__version__ = "0.1.0"
