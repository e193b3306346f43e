//! Verify-command implementations: condensed versions of the invariant
//! suites at CLI-scale parameters, emitting measured values against pinned
//! bounds.

use num_complex::Complex64;

use su11kit::coherent::{
    coherent_state, displacement_parameter, displacement_unitary, eigen_residual,
    resolution_of_identity, DiskPoint, HalfPlanePoint,
};
use su11kit::extension::{
    heterodyne_extension, isometric_extension, lambda_gt1_extension, symmetric_extension_report,
};
use su11kit::halfline::{affine_coherent, basis_fn, matrix_elements, AffineParams, Grid, HalfLineOps};
use su11kit::linalg;
use su11kit::povm::{
    disk_moments, hyponormality_gap, naimark_dilate, random_finite_povm, sample,
    vacuum_radial_cdf, DiskDensity,
};
use su11kit::quad::DiskQuadrature;
use su11kit::rep::{build_annihilation_pair, build_ladder, build_skew_triplet, casimir};
use su11kit::squeezed::{
    boson_space, characteristic_equations_check, multiparticle_reduction, su11_from_boson,
    squeezed_vacuum, Parity, SqueezeParams,
};
use su11kit::{BasisTag, LowestWeight, StateVector, ToleranceProfile, TruncatedOperator};

use crate::formats::{CheckRow, SuiteReport};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub struct SuiteParams {
    pub lambda: f64,
    pub k: f64,
    pub dim: usize,
    pub boson_dim: usize,
    pub grid_size: usize,
    pub seed: u64,
    pub tol: ToleranceProfile,
}

pub fn run_suite(name: &str, p: &SuiteParams) -> Result<SuiteReport, String> {
    match name {
        "repkit" | "rep" => repkit_suite(p),
        "coherent" => coherent_suite(p),
        "povm" => povm_suite(p),
        "halfline" => halfline_suite(p),
        "squeezed" => squeezed_suite(p),
        "extension" | "normext" => extension_suite(p),
        other => Err(format!(
            "unknown suite '{other}' (expected repkit, coherent, povm, halfline, squeezed, extension, or all)"
        )),
    }
}

pub const ALL_SUITES: [&str; 6] = [
    "repkit",
    "coherent",
    "povm",
    "halfline",
    "squeezed",
    "extension",
];

fn weight(p: &SuiteParams) -> Result<LowestWeight, String> {
    LowestWeight::new(p.lambda).map_err(|e| e.to_string())
}

fn repkit_suite(p: &SuiteParams) -> Result<SuiteReport, String> {
    let lam = weight(p)?;
    let dim = p.dim;
    let l = build_ladder(lam, dim).map_err(|e| e.to_string())?;
    let s = build_skew_triplet(&l);
    let mut checks = Vec::new();

    let scale = |a: &TruncatedOperator, b: &TruncatedOperator| (a.max_abs() * b.max_abs()).max(1.0);
    let comm = |a: &TruncatedOperator, b: &TruncatedOperator, want: &TruncatedOperator| {
        (&a.commutator(b).interior(1).unwrap() - &want.interior(1).unwrap()).max_abs()
            / scale(a, b)
    };
    checks.push(CheckRow::at_most(
        "ladder_commutator_raising",
        comm(&l.l0, &l.l_plus, &l.l_plus.scaled(c(2.0))),
        p.tol.algebraic,
    ));
    checks.push(CheckRow::at_most(
        "ladder_commutator_pair",
        comm(&l.l_plus, &l.l_minus, &l.l0),
        p.tol.algebraic,
    ));
    checks.push(CheckRow::at_most(
        "skew_commutator_pair",
        comm(&s.e_plus, &s.e_minus, &s.e0),
        p.tol.algebraic,
    ));
    checks.push(CheckRow::at_most(
        "weight_operator_hermitian",
        l.l0.hermiticity_defect(),
        0.0,
    ));
    checks.push(CheckRow::at_most(
        "raising_adjoint_is_minus_lowering",
        (&l.l_plus.adjoint() + &l.l_minus).max_abs(),
        0.0,
    ));
    let cf = casimir(lam, dim).map_err(|e| e.to_string())?;
    let scalar = p.lambda * (p.lambda - 2.0);
    let id_in = TruncatedOperator::identity(dim - 1, BasisTag::Su11Number).unwrap();
    let cas_scale = l.l0.max_abs() * l.l0.max_abs() + 4.0 * l.l_plus.max_abs() * l.l_minus.max_abs();
    checks.push(CheckRow::at_most(
        "casimir_scalar",
        (&cf.normal_ordered.interior(1).unwrap() - &id_in.scaled(c(scalar))).max_abs() / cas_scale,
        p.tol.algebraic,
    ));
    checks.push(CheckRow::at_most(
        "casimir_form_agreement",
        cf.form_deviation / cas_scale,
        p.tol.algebraic,
    ));
    let pair = build_annihilation_pair(lam, dim).map_err(|e| e.to_string())?;
    let mut a_defect = 0.0f64;
    let aa = (&pair.annihilation * &pair.creation).interior(1).unwrap();
    for n in 0..dim - 1 {
        let nf = n as f64;
        let want = if (p.lambda - 1.0).abs() < 1e-15 {
            1.0
        } else {
            (nf + 1.0) / (nf + p.lambda)
        };
        a_defect = a_defect.max((aa.entry(n, n) - c(want)).norm());
    }
    checks.push(CheckRow::at_most(
        "annihilation_pair_product",
        a_defect,
        p.tol.algebraic,
    ));
    let eig_max = linalg::eigenvalues(pair.annihilation.matrix())
        .iter()
        .map(|e| e.norm())
        .fold(0.0f64, f64::max);
    checks.push(CheckRow::at_most(
        "truncated_annihilation_spectrum",
        eig_max,
        p.tol.algebraic,
    ));

    Ok(SuiteReport::new(
        "repkit",
        vec![("lambda".into(), p.lambda), ("dim".into(), dim as f64)],
        checks,
    ))
}

fn coherent_suite(p: &SuiteParams) -> Result<SuiteReport, String> {
    let lam = weight(p)?;
    let dim = p.dim.max(64);
    let mut checks = Vec::new();

    let pair = build_annihilation_pair(lam, dim).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for ir in 1..=4 {
        let r = 0.2 * ir as f64;
        for ia in 0..4 {
            let theta = std::f64::consts::PI * 0.5 * ia as f64 + 0.3;
            let zeta = DiskPoint::new(Complex64::from_polar(r, theta)).unwrap();
            let state = coherent_state(lam, zeta, dim, &p.tol).map_err(|e| e.to_string())?;
            worst = worst
                .max(eigen_residual(&pair.annihilation, &state, zeta.value()).unwrap());
        }
    }
    checks.push(CheckRow::at_most("eigen_equation_residual", worst, 1e-8));

    let zeta = DiskPoint::new(c(0.5)).unwrap();
    let xi = displacement_parameter(zeta);
    let u = displacement_unitary(xi, lam, dim, &p.tol).map_err(|e| e.to_string())?;
    let zero = StateVector::basis_state(dim, 0, BasisTag::Su11Number).unwrap();
    let gap = u
        .apply(&zero)
        .unwrap()
        .sub(&coherent_state(lam, zeta, dim, &p.tol).map_err(|e| e.to_string())?)
        .unwrap()
        .norm();
    checks.push(CheckRow::at_most("closed_form_vs_exponential", gap, 1e-8));

    if p.lambda > 1.0 {
        let res = resolution_of_identity(lam, 8, 200, 32, 0.999).map_err(|e| e.to_string())?;
        let defect = (res.op.entry(0, 0).re - 1.0).abs();
        checks.push(CheckRow::at_most("resolution_lowest_diagonal", defect, 2e-3));
        let mut oracle = 0.0f64;
        for n in 0..8 {
            oracle = oracle
                .max((res.op.entry(n, n).re - (1.0 - res.analytic_defect[n])).abs());
        }
        checks.push(CheckRow::at_most(
            "resolution_matches_radial_oracle",
            oracle,
            p.tol.quadrature,
        ));
    }

    Ok(SuiteReport::new(
        "coherent",
        vec![("lambda".into(), p.lambda), ("dim".into(), dim as f64)],
        checks,
    ))
}

fn povm_suite(p: &SuiteParams) -> Result<SuiteReport, String> {
    let lam = weight(p)?;
    let mut checks = Vec::new();

    // Hyponormality certificate: sign depends on the weight.
    let pair = build_annihilation_pair(lam, p.dim.max(8)).map_err(|e| e.to_string())?;
    let gap = hyponormality_gap(&pair.creation, 1).map_err(|e| e.to_string())?;
    if p.lambda >= 1.0 {
        checks.push(CheckRow::at_least("hyponormality_gap", gap, -p.tol.algebraic));
    } else {
        // Below weight one the gap must be clearly negative.
        checks.push(CheckRow::below("hyponormality_gap_negative", gap, -1e-3));
    }

    // Naimark dilations on seeded instances.
    let mut naimark = 0.0f64;
    for seed in 0..10u64 {
        let povm = random_finite_povm(4, 3, p.seed ^ seed, &p.tol).map_err(|e| e.to_string())?;
        let dil = naimark_dilate(&povm, &p.tol).map_err(|e| e.to_string())?;
        naimark = naimark.max(dil.isometry_defect).max(dil.reconstruction_error);
    }
    checks.push(CheckRow::at_most(
        "naimark_reconstruction",
        naimark,
        p.tol.algebraic,
    ));

    // Densities, moments, and sampling only exist above weight one.
    if p.lambda > 1.0 {
        let dim = 12;
        let quad = DiskQuadrature::new(400, 64, 0.999999).unwrap();
        let mut moment = 0.0f64;
        for n in 0..=4usize {
            let psi = StateVector::basis_state(dim, n, BasisTag::Su11Number).unwrap();
            let density = DiskDensity::new(lam, &psi).map_err(|e| e.to_string())?;
            let est = disk_moments(&density, &quad);
            let cpsi = pair_creation_apply(&lam, dim, &psi)?;
            moment = moment
                .max((est.mean - psi.overlap(&cpsi).unwrap()).norm())
                .max((est.second - cpsi.norm().powi(2)).abs());
        }
        checks.push(CheckRow::at_most("moment_identities", moment, 1e-4));

        let vac = StateVector::basis_state(8, 0, BasisTag::Su11Number).unwrap();
        let density = DiskDensity::new(lam, &vac).map_err(|e| e.to_string())?;
        let batch = sample(&density, 4000, p.seed, 0.999999).map_err(|e| e.to_string())?;
        let mut radii: Vec<f64> = batch.outcomes.iter().map(|z| z.norm()).collect();
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = radii.len() as f64;
        let mut ks = 0.0f64;
        for (i, &r) in radii.iter().enumerate() {
            let f = vacuum_radial_cdf(lam, r, 0.999999);
            ks = ks
                .max((f - (i + 1) as f64 / n).abs())
                .max((f - i as f64 / n).abs());
        }
        let ks_crit = (-(0.0005f64).ln() / 2.0).sqrt() / n.sqrt();
        checks.push(CheckRow::below("sampling_ks_statistic", ks, ks_crit));
    }

    Ok(SuiteReport::new(
        "povm",
        vec![("lambda".into(), p.lambda), ("seed".into(), p.seed as f64)],
        checks,
    ))
}

fn pair_creation_apply(
    lam: &LowestWeight,
    dim: usize,
    psi: &StateVector,
) -> Result<StateVector, String> {
    let pair = build_annihilation_pair(*lam, dim).map_err(|e| e.to_string())?;
    pair.creation.apply(psi).map_err(|e| e.to_string())
}

fn halfline_suite(p: &SuiteParams) -> Result<SuiteReport, String> {
    let params = AffineParams::new(p.k).map_err(|e| e.to_string())?;
    let grid = Grid::log(1e-8, 60.0, p.grid_size.max(512)).map_err(|e| e.to_string())?;
    let ops = HalfLineOps::new(params, &grid).map_err(|e| e.to_string())?;
    let mut checks = Vec::new();

    let basis: Vec<_> = (0..6)
        .map(|n| basis_fn(n, params, &grid, &p.tol))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let ladder = build_ladder(params.lambda(), 6).map_err(|e| e.to_string())?;
    let mut corr = 0.0f64;
    type Apply = fn(
        &HalfLineOps,
        &Grid,
        &su11kit::halfline::GridFunction,
    ) -> su11kit::Result<su11kit::halfline::GridFunction>;
    let table: [(&TruncatedOperator, Apply); 3] = [
        (&ladder.l0, HalfLineOps::l0),
        (&ladder.l_plus, HalfLineOps::l_plus),
        (&ladder.l_minus, HalfLineOps::l_minus),
    ];
    for (reference, apply) in table {
        let got =
            matrix_elements(&grid, &basis, |f| apply(&ops, &grid, f)).map_err(|e| e.to_string())?;
        corr = corr.max(linalg::max_abs(&(&got - reference.matrix())));
    }
    checks.push(CheckRow::at_most("correspondence_matrices", corr, p.tol.grid));

    let eta = HalfPlanePoint::new(Complex64::new(0.6, 1.5)).unwrap();
    let state = affine_coherent(eta, params, &grid, &p.tol).map_err(|e| e.to_string())?;
    let image = ops.cayley(&grid, &state).map_err(|e| e.to_string())?;
    let resid = grid
        .norm(&image.sub(&state.scaled(eta.value())).unwrap())
        .unwrap()
        / eta.value().norm();
    checks.push(CheckRow::at_most("generator_eigen_equation", resid, p.tol.grid));

    let norm_defect = (grid.norm(&state).unwrap() - 1.0).abs();
    checks.push(CheckRow::at_most(
        "coherent_normalization",
        norm_defect,
        p.tol.grid,
    ));

    Ok(SuiteReport::new(
        "halfline",
        vec![("k".into(), p.k), ("grid_size".into(), grid.len() as f64)],
        checks,
    ))
}

fn squeezed_suite(p: &SuiteParams) -> Result<SuiteReport, String> {
    let d_b = p.boson_dim.max(64);
    let space = boson_space(d_b).map_err(|e| e.to_string())?;
    let mut checks = Vec::new();

    let mut sector_defect = 0.0f64;
    for (parity, lam) in [(Parity::Even, 0.5), (Parity::Odd, 1.5)] {
        let sector = su11_from_boson(&space, parity).map_err(|e| e.to_string())?;
        let reference =
            build_ladder(LowestWeight::new(lam).unwrap(), d_b / 2).map_err(|e| e.to_string())?;
        sector_defect = sector_defect
            .max((&sector.l0.interior(1).unwrap() - &reference.l0.interior(1).unwrap()).max_abs())
            .max(
                (&sector.l_plus.interior(1).unwrap() - &reference.l_plus.interior(1).unwrap())
                    .max_abs(),
            );
    }
    checks.push(CheckRow::at_most(
        "sector_isomorphism",
        sector_defect,
        p.tol.algebraic,
    ));

    let sq = SqueezeParams::from_squeeze(1.0, 0.3);
    let state = squeezed_vacuum(&sq, d_b.max(256), &p.tol).map_err(|e| e.to_string())?;
    let big = boson_space(d_b.max(256)).map_err(|e| e.to_string())?;
    let mode = &big.annihilation.scaled(sq.mu()) + &big.creation.scaled(sq.nu());
    checks.push(CheckRow::at_most(
        "bogoliubov_kernel_residual",
        mode.apply(&state).unwrap().norm(),
        1e-7,
    ));

    let report =
        characteristic_equations_check(&sq, d_b.max(256), &p.tol).map_err(|e| e.to_string())?;
    checks.push(CheckRow::at_most(
        "position_momentum_eigenvalue_residual",
        report.position_momentum_residual,
        p.tol.quadrature,
    ));
    checks.push(CheckRow::at_most(
        "ladder_eigenvalue_residual",
        report.ladder_residual,
        p.tol.quadrature,
    ));

    let mut table_ok = true;
    for n in 1..=6 {
        let row = multiparticle_reduction(n).map_err(|e| e.to_string())?;
        table_ok &= row.subnormal == (n >= 2) && (row.lambda - n as f64 / 2.0).abs() < 1e-15;
    }
    checks.push(CheckRow::at_least(
        "reduction_table_threshold",
        if table_ok { 1.0 } else { 0.0 },
        1.0,
    ));

    Ok(SuiteReport::new(
        "squeezed",
        vec![("boson_dim".into(), d_b as f64)],
        checks,
    ))
}

fn extension_suite(p: &SuiteParams) -> Result<SuiteReport, String> {
    let mut checks = Vec::new();

    let (_op, het) = heterodyne_extension(p.boson_dim.min(24).max(8)).map_err(|e| e.to_string())?;
    checks.push(CheckRow::at_most(
        "heterodyne_normality",
        het.normality_residual,
        p.tol.algebraic,
    ));
    checks.push(CheckRow::at_most(
        "heterodyne_intertwining",
        het.extension_residual,
        p.tol.algebraic,
    ));

    let grid = Grid::log(1e-6, 60.0, p.grid_size.max(512)).map_err(|e| e.to_string())?;
    let sym = symmetric_extension_report(&grid).map_err(|e| e.to_string())?;
    checks.push(CheckRow::at_most(
        "symmetric_hermiticity",
        sym.report.normality_residual,
        p.tol.quadrature,
    ));
    checks.push(CheckRow::at_most(
        "symmetric_intertwining",
        sym.report.extension_residual,
        p.tol.quadrature,
    ));
    checks.push(CheckRow::at_least(
        "symmetric_domain_violation_detected",
        sym.domain_violation_residual,
        1e-2,
    ));

    let shift = build_annihilation_pair(LowestWeight::new(1.0).unwrap(), 16)
        .map_err(|e| e.to_string())?
        .creation;
    let (_op, iso) = isometric_extension(&shift, 1, &p.tol).map_err(|e| e.to_string())?;
    checks.push(CheckRow::at_most(
        "isometric_unitarity",
        iso.normality_residual,
        p.tol.algebraic,
    ));

    let params = AffineParams::new(if p.k > 0.0 { p.k } else { 0.5 }).map_err(|e| e.to_string())?;
    let tensor_grid = Grid::log(1e-6, 60.0, p.grid_size.min(256).max(128)).map_err(|e| e.to_string())?;
    let tensor = lambda_gt1_extension(params, &tensor_grid, &p.tol).map_err(|e| e.to_string())?;
    checks.push(CheckRow::at_most(
        "tensor_normality",
        tensor.normality_residual,
        p.tol.grid,
    ));
    checks.push(CheckRow::at_most(
        "tensor_intertwining",
        tensor.extension_residual,
        p.tol.grid,
    ));

    Ok(SuiteReport::new(
        "extension",
        vec![
            ("boson_dim".into(), p.boson_dim.min(24).max(8) as f64),
            ("grid_size".into(), p.grid_size.max(512) as f64),
        ],
        checks,
    ))
}
