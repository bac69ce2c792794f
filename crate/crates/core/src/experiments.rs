//! Named experiment presets. Each is a pure function of its parameters and
//! returns a table whose rows are sorted by parameter tuple, so two runs
//! produce byte-identical CSV.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{check_dual_certificate, enumerate_vertices, solve_lp, LpResult};
use crate::proof::{build_single_cut_proof, build_theorem4_tree, run_branch_and_cut, verify_proof, Strategy};
use crate::rational::{self, frac, Rational};
use crate::search::{min_bb_tree_size, SearchOutcome, SearchSpace};
use crate::transforms::{compose_complementary, cp_proof_to_bb};
use crate::zoo::{
    classify_splits, cks_tetrahedron, directional_cg_search, count_generation_nodes, jeroslow_inequality,
    lp_value_lemma_violations, one_round_cg_search, random_bounded,
    sparse_cut_sweep, sperner_sweep, triangle_t, vertex_split_sweep,
};

/// Name and one-line description of every preset.
pub const PRESETS: &[(&str, &str)] = &[
    ("theorem4", "sparse branch-and-bound tree for the partial-objective instance"),
    ("cg-single", "one Chvatal-Gomory cut proof of sum x <= floor(n/2)"),
    ("cp-to-bb", "cutting-plane proof converted to branch-and-bound"),
    ("min-tree", "minimum branch-and-bound tree size, dense vs sparse splits"),
    ("generation", "generation-node counts and LP-value lemma on minimal trees"),
    ("sperner", "Sperner bound on 0/1 solutions of one linear equation"),
    ("vD-bound", "optimal vertices strictly inside a split vs p(n, t)"),
    ("sparse-cut", "triviality of valid sparse cuts on the Jeroslow polytope"),
    ("cks", "variable branching on the CKS tetrahedron across heights"),
    ("triangle", "branching vs one round of CG cuts on the triangle T"),
    ("composition", "branch-and-cut proof of the composed instance"),
    ("lp-oracle", "simplex optimum vs brute-force vertex maximum"),
];

/// Optional overrides; `None` keeps the preset's default grid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresetParams {
    pub n: Option<usize>,
    pub s: Option<usize>,
    pub coefficient_bound: Option<u64>,
    pub h: Option<i64>,
    pub node_budget: Option<usize>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Table {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// True when the table has a `pass` column and every row passes.
    pub fn all_pass(&self) -> bool {
        match self.column("pass") {
            Some(i) => self.rows.iter().all(|r| r[i] == "true"),
            None => false,
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn grid<T: Copy>(single: Option<T>, default: &[T]) -> Vec<T> {
    match single {
        Some(v) => vec![v],
        None => default.to_vec(),
    }
}

fn s<T: ToString>(v: T) -> String {
    v.to_string()
}

pub fn run_preset(name: &str, p: &PresetParams) -> Result<Table> {
    match name {
        "theorem4" => theorem4(p),
        "cg-single" => cg_single(p),
        "cp-to-bb" => cp_to_bb(p),
        "min-tree" => min_tree(p),
        "generation" => generation(p),
        "sperner" => sperner(p),
        "vD-bound" => vd_bound(p),
        "sparse-cut" => sparse_cut(p),
        "cks" => cks(p),
        "triangle" => triangle(p),
        "composition" => composition(p),
        "lp-oracle" => lp_oracle(p),
        _ => Err(Error::InvalidArgument(format!(
            "unknown preset {name:?}; known: {}",
            PRESETS.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
        ))),
    }
}

fn theorem4(p: &PresetParams) -> Result<Table> {
    let mut t = Table::new(&["n", "size", "expected", "max_sparsity", "verified", "pass"]);
    for n in grid(p.n, &[3, 5, 7, 9]) {
        let tree = build_theorem4_tree(n)?;
        let ok = verify_proof(&tree).accepted();
        let stats = tree.stats();
        let pass = ok && stats.size == n + 2 && stats.max_sparsity == 1;
        t.push(vec![s(n), s(stats.size), s(n + 2), s(stats.max_sparsity), s(ok), s(pass)]);
    }
    Ok(t)
}

/// The `lambda = 1/2` CG proof on the Jeroslow row.
pub fn jeroslow_cg_proof(n: usize) -> Result<crate::proof::ProofTree> {
    let inst = jeroslow_inequality(n)?;
    let mut lambda = rational::zeros(inst.polyhedron.oriented_len());
    lambda[0] = frac(1, 2);
    build_single_cut_proof(&inst, &lambda)
}

fn cg_single(p: &PresetParams) -> Result<Table> {
    let mut t = Table::new(&["n", "size", "max_sparsity", "verified", "pass"]);
    for n in grid(p.n, &[3, 5, 7]) {
        let tree = jeroslow_cg_proof(n)?;
        let ok = verify_proof(&tree).accepted();
        let stats = tree.stats();
        t.push(vec![s(n), s(stats.size), s(stats.max_sparsity), s(ok), s(ok && stats.size == 2)]);
    }
    Ok(t)
}

fn cp_to_bb(p: &PresetParams) -> Result<Table> {
    let mut t = Table::new(&["n", "cuts", "bb_size", "max_sparsity_in", "max_sparsity_out", "verified", "pass"]);
    for n in grid(p.n, &[3, 5, 7]) {
        let tree = jeroslow_cg_proof(n)?;
        let bb = cp_proof_to_bb(&tree)?;
        let ok = verify_proof(&bb).accepted() && bb.is_pure_branch_and_bound();
        let (a, b) = (tree.stats(), bb.stats());
        let pass = ok && b.size <= 3 * a.cut_count && a.max_sparsity == b.max_sparsity;
        t.push(vec![s(n), s(a.cut_count), s(b.size), s(a.max_sparsity), s(b.max_sparsity), s(ok), s(pass)]);
    }
    Ok(t)
}

fn search_space(p: &PresetParams, sparsity: usize) -> SearchSpace {
    let mut space = SearchSpace::new(sparsity, p.coefficient_bound.unwrap_or(1));
    if let Some(b) = p.node_budget {
        space = space.with_budget(b);
    }
    space
}

fn min_tree(p: &PresetParams) -> Result<Table> {
    let mut t = Table::new(&["n", "s", "B", "status", "lower", "upper", "leaves", "verified"]);
    let points: Vec<(usize, usize)> = match (p.n, p.s) {
        (Some(n), Some(sp)) => vec![(n, sp)],
        (Some(n), None) => vec![(n, 1), (n, n)],
        (None, Some(sp)) => vec![(3, sp), (5, sp)],
        (None, None) => vec![(3, 1), (3, 3), (5, 1), (5, 5)],
    };
    for (n, sp) in points {
        let inst = jeroslow_inequality(n)?;
        let out = min_bb_tree_size(&inst, &search_space(p, sp))?;
        let status = match out {
            SearchOutcome::Exact(_) => "exact",
            SearchOutcome::Bracket(_) => "bracket",
        };
        let (leaves, ok) = match out.witness() {
            Some(w) => (s(w.leaves().len()), s(verify_proof(w).accepted())),
            None => (String::new(), String::new()),
        };
        t.push(vec![
            s(n),
            s(sp),
            s(p.coefficient_bound.unwrap_or(1)),
            s(status),
            s(out.lower()),
            out.upper().map(s).unwrap_or_default(),
            leaves,
            ok,
        ]);
    }
    Ok(t)
}

fn generation(p: &PresetParams) -> Result<Table> {
    let mut t = Table::new(&["n", "s", "m", "generation_nodes", "required", "lemma_violations", "pass"]);
    let points: Vec<(usize, usize)> = match (p.n, p.s) {
        (Some(n), Some(sp)) => vec![(n, sp)],
        _ => vec![(3, 1), (3, 3), (5, 1)],
    };
    for (n, sp) in points {
        let inst = jeroslow_inequality(n)?;
        let out = min_bb_tree_size(&inst, &search_space(p, sp))?;
        let SearchOutcome::Exact(min) = out else {
            return Err(Error::BudgetExceeded(format!("no exact minimum for n={n}, s={sp}")));
        };
        let class = classify_splits(&min.witness)?;
        let violations = lp_value_lemma_violations(&min.witness, &class, sp)?.len();
        // Generations m = 0 ..= floor(n/2)/s - 1; an empty range still reports the lemma.
        let top = (n / 2) / sp;
        if top == 0 {
            t.push(vec![s(n), s(sp), String::new(), String::new(), String::new(), s(violations), s(violations == 0)]);
        }
        for m in 0..top {
            let count = count_generation_nodes(&class, m);
            let required = 1usize << m;
            t.push(vec![
                s(n),
                s(sp),
                s(m),
                s(count),
                s(required),
                s(violations),
                s(count >= required && violations == 0),
            ]);
        }
    }
    Ok(t)
}

fn sperner(p: &PresetParams) -> Result<Table> {
    let c = p.coefficient_bound.unwrap_or(3);
    let mut t = Table::new(&["k", "vectors", "max_count", "bound", "pass"]);
    let ks: Vec<usize> = match p.n {
        Some(k) => vec![k],
        None => (1..=4).collect(),
    };
    let rows: Vec<_> = ks.par_iter().map(|&k| sperner_sweep(k, c as i64)).collect::<Result<_>>()?;
    for r in rows {
        t.push(vec![s(r.k), s(r.vectors), s(r.max_count), s(r.bound), s(r.pass)]);
    }
    Ok(t)
}

fn vd_bound(p: &PresetParams) -> Result<Table> {
    let n = p.n.unwrap_or(7);
    let b = p.coefficient_bound.unwrap_or(2);
    let mut t = Table::new(&["t", "max_observed", "p_bound", "pass"]);
    for r in vertex_split_sweep(n, b, (-(n as i64), n as i64))? {
        t.push(vec![s(r.t), s(r.max_observed), s(&r.p_bound), s(r.pass)]);
    }
    Ok(t)
}

fn sparse_cut(p: &PresetParams) -> Result<Table> {
    let n = p.n.unwrap_or(7);
    let support = p.s.unwrap_or(n / 2);
    let c = p.coefficient_bound.unwrap_or(3) as i64;
    let r = sparse_cut_sweep(n, support, c, (-(support as i64) * c, support as i64 * c))?;
    let mut t = Table::new(&["n", "max_support", "B", "candidates", "valid", "trivial", "pass"]);
    t.push(vec![s(n), s(support), s(c), s(r.candidates), s(r.valid), s(r.trivial), s(r.pass())]);
    Ok(t)
}

fn cks(p: &PresetParams) -> Result<Table> {
    let hs = grid(p.h, &[1, 10, 100, 1000]);
    let mut t = Table::new(&["h", "size", "verified"]);
    let trees: Vec<_> = hs
        .par_iter()
        .map(|&h| run_branch_and_cut(&cks_tetrahedron(h)?, &Strategy::variable_branching()))
        .collect::<Result<_>>()?;
    for (h, tree) in hs.iter().zip(trees) {
        t.push(vec![s(h), s(tree.size()), s(verify_proof(&tree).accepted())]);
    }
    Ok(t)
}

fn triangle(p: &PresetParams) -> Result<Table> {
    let hs = grid(p.h, &[2, 4, 8]);
    let mut t = Table::new(&[
        "h",
        "bb_size",
        "bb_verified",
        "cg_multipliers",
        "cg_proving_cuts",
        "cg_best_value",
        "directional_best_value",
        "pass",
    ]);
    let rows: Vec<_> = hs
        .par_iter()
        .map(|&h| -> Result<Vec<String>> {
            let tree = run_branch_and_cut(&triangle_t(h)?, &Strategy::variable_branching())?;
            let ok = verify_proof(&tree).accepted();
            let cg = one_round_cg_search(h)?;
            let all = directional_cg_search(h, 2 * h)?;
            let pass = ok && tree.size() == 3 && !cg.proves_target() && !all.proves_target();
            Ok(vec![
                s(h),
                s(tree.size()),
                s(ok),
                s(cg.multipliers_checked),
                s(cg.proving_cuts.len()),
                rational::format(&cg.best_value),
                rational::format(&all.best_value),
                s(pass),
            ])
        })
        .collect::<Result<_>>()?;
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

fn lp_value(r: &LpResult) -> String {
    match r {
        LpResult::Optimal(o) => rational::format(&o.value),
        LpResult::Infeasible(_) => "infeasible".into(),
        LpResult::Unbounded => "unbounded".into(),
    }
}

fn composition(p: &PresetParams) -> Result<Table> {
    let n = p.n.unwrap_or(5);
    let h = p.h.unwrap_or(4);
    let a = jeroslow_inequality(n)?;
    let b = triangle_t(h)?;
    let gadget = compose_complementary(&a, &b)?;
    let proof = gadget.composed_proof()?;
    let ok = verify_proof(&proof).accepted();
    let lp_a = solve_lp(&a.polyhedron, &a.objective)?;
    let lp_b = solve_lp(&b.polyhedron, &b.objective)?;
    let f0 = gadget.fiber_lp_value(0)?;
    let f1 = gadget.fiber_lp_value(1)?;
    let fibers_match = f0.value() == lp_a.value() && f1.value() == lp_b.value();
    let mut t = Table::new(&["n", "h", "size", "verified", "fiber0_lp", "a_lp", "fiber1_lp", "b_lp", "pass"]);
    t.push(vec![
        s(n),
        s(h),
        s(proof.size()),
        s(ok),
        lp_value(&f0),
        lp_value(&lp_a),
        lp_value(&f1),
        lp_value(&lp_b),
        s(ok && proof.size() <= 11 && fibers_match),
    ]);
    Ok(t)
}

/// Shape of the `i`-th random LP: `n_int + n_cont <= 4`.
pub fn lp_oracle_shape(i: usize) -> (usize, usize, usize) {
    let dim = 1 + i % 4;
    let n_cont = (i / 4) % dim;
    (dim - n_cont, n_cont, 1 + i % 3)
}

fn lp_oracle(p: &PresetParams) -> Result<Table> {
    let count = p.count.unwrap_or(100);
    let seed = p.seed.unwrap_or(0);
    let mut t = Table::new(&["seed", "n_int", "n_cont", "lp_value", "vertex_max", "certificate", "pass"]);
    let rows: Vec<_> = (0..count)
        .into_par_iter()
        .map(|i| -> Result<Vec<String>> {
            let (n_int, n_cont, extra) = lp_oracle_shape(i);
            let sd = seed + i as u64;
            let inst = random_bounded(sd, n_int, n_cont, extra, 3);
            let lp = solve_lp(&inst.polyhedron, &inst.objective)?;
            let best: Option<Rational> = enumerate_vertices(&inst.polyhedron)?
                .iter()
                .map(|v| rational::dot(v, &inst.objective))
                .max();
            let cert = match &lp {
                LpResult::Optimal(o) => check_dual_certificate(&inst.polyhedron, &inst.objective, o),
                _ => false,
            };
            let pass = cert && lp.value() == best.as_ref();
            Ok(vec![
                s(sd),
                s(n_int),
                s(n_cont),
                lp_value(&lp),
                best.as_ref().map(rational::format).unwrap_or_default(),
                s(cert),
                s(pass),
            ])
        })
        .collect::<Result<_>>()?;
    for r in rows {
        t.push(r);
    }
    Ok(t)
}
