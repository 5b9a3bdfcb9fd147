# Tests for the Schur coloring counters, searches and surfaces
