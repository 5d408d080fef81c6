#pragma once

namespace u1d {

// Shared numeric tolerances and discretization defaults. Every operation that
// needs a threshold reads it from here so a caller can override all of them
// in one place.
struct NumericPolicy {
  // Linear algebra.
  double tau_herm = 1e-10;
  double tau_unit = 1e-10;
  double tau_eig = 1e-10;
  double tau_recon = 1e-10;

  // Below this gap the direction of the winding vector is meaningless.
  double tau_gap = 1e-9;

  // Phase bookkeeping.
  double tau_wind = 1e-6;
  double tau_quant = 1e-3;

  // Out-of-plane tolerance for planar-only routines.
  double tau_planar = 1e-9;

  // |Tr[rho V]| below this means the Uhlmann phase is undefined.
  double degenerate_arg = 1e-9;

  // Wilson-loop links below this modulus are rejected.
  double min_overlap = 1e-6;

  // Relative error budget for the central difference of sqrt(rho); the
  // Richardson check fails at ten times this value.
  double tau_diff = 1e-4;

  // Differentiation step as a fraction of the holonomy grid spacing.
  double diff_step_fraction = 1.0 / 8.0;

  int winding_samples = 2048;
  int holonomy_steps = 4096;
  int quad_panels = 8192;
};

}  // namespace u1d
