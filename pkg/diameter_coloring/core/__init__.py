# Core primitives for Diameter Coloring
