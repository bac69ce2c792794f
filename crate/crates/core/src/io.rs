//! JSON files for instances and proofs.
//!
//! A document is `{"format_version": 1, "instance": {...}}`, optionally with a
//! `"proof"` object next to the instance. Rationals are always `"p/q"` (or
//! `"p"`) strings, never floats. Parsing is strict: unknown fields, dangling
//! node ids and dimension mismatches are schema errors naming the field.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cuts::{Certificate, CuttingPlane, FarkasWitness};
use crate::disjunction::{make_interval_partition, make_split, Disjunction, Interval, IntervalPartition, Template};
use crate::error::{Error, Result};
use crate::polyhedron::{Goal, Instance, LinearConstraint, Polyhedron, Relation};
use crate::proof::{LeafReason, Mode, NodeKind, ProofNode, ProofTree};
use crate::rational::{self, Rational};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format_version: u32,
    instance: InstanceDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    proof: Option<ProofDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintDto {
    coeffs: Vec<String>,
    relation: String,
    rhs: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDto {
    n_int: usize,
    n_cont: usize,
    constraints: Vec<ConstraintDto>,
    objective: Vec<String>,
    bound: String,
    goal: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalDto {
    lower: Option<String>,
    upper: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "template", rename_all = "kebab-case", deny_unknown_fields)]
enum DisjunctionDto {
    Split { pi: Vec<String>, pi0: String },
    Variable { index: usize, pi0: String },
    Generic { index: usize, intervals: Vec<IntervalDto> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum CertificateDto {
    Cg {
        multipliers: Vec<String>,
    },
    Disjunctive {
        disjunction: DisjunctionDto,
        witnesses: Vec<Vec<String>>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CutDto {
    halfspace: ConstraintDto,
    certificate: CertificateDto,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum KindDto {
    Open,
    Branch {
        disjunction: DisjunctionDto,
        children: Vec<usize>,
    },
    Cut {
        cut: CutDto,
        child: usize,
    },
    Leaf {
        reason: String,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDto {
    id: usize,
    parent: Option<usize>,
    added: Vec<ConstraintDto>,
    kind: KindDto,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProofDto {
    mode: String,
    root: usize,
    nodes: Vec<NodeDto>,
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        field: field.into(),
        message: message.into(),
    }
}

// ---- emission ----

fn strs(values: &[Rational]) -> Vec<String> {
    values.iter().map(rational::format).collect()
}

fn constraint_dto(c: &LinearConstraint) -> ConstraintDto {
    ConstraintDto {
        coeffs: strs(&c.coeffs),
        relation: c.relation.symbol().to_string(),
        rhs: rational::format(&c.rhs),
    }
}

fn instance_dto(inst: &Instance) -> InstanceDto {
    InstanceDto {
        n_int: inst.n_int(),
        n_cont: inst.n_cont(),
        constraints: inst.polyhedron.constraints.iter().map(constraint_dto).collect(),
        objective: strs(&inst.objective),
        bound: rational::format(&inst.bound),
        goal: inst.goal.name().to_string(),
    }
}

fn disjunction_dto(d: &Disjunction) -> DisjunctionDto {
    match &d.template {
        Template::Split { pi, pi0 } => DisjunctionDto::Split {
            pi: pi.iter().map(|v| v.to_string()).collect(),
            pi0: pi0.to_string(),
        },
        Template::Variable { index, pi0 } => DisjunctionDto::Variable {
            index: *index,
            pi0: pi0.to_string(),
        },
        Template::Generic(p) => DisjunctionDto::Generic {
            index: p.index,
            intervals: p
                .intervals
                .iter()
                .map(|iv| IntervalDto {
                    lower: iv.lower.as_ref().map(|v| v.to_string()),
                    upper: iv.upper.as_ref().map(|v| v.to_string()),
                })
                .collect(),
        },
    }
}

fn cut_dto(cut: &CuttingPlane) -> CutDto {
    let certificate = match &cut.certificate {
        Certificate::Cg { multipliers } => CertificateDto::Cg {
            multipliers: strs(multipliers),
        },
        Certificate::Disjunctive {
            disjunction,
            witnesses,
        } => CertificateDto::Disjunctive {
            disjunction: disjunction_dto(disjunction),
            witnesses: witnesses.iter().map(|w| strs(&w.multipliers)).collect(),
        },
    };
    CutDto {
        halfspace: constraint_dto(&cut.halfspace),
        certificate,
    }
}

fn node_dto(node: &ProofNode) -> NodeDto {
    let kind = match &node.kind {
        NodeKind::Open => KindDto::Open,
        NodeKind::Branch {
            disjunction,
            children,
        } => KindDto::Branch {
            disjunction: disjunction_dto(disjunction),
            children: children.clone(),
        },
        NodeKind::Cut { cut, child } => KindDto::Cut {
            cut: cut_dto(cut),
            child: *child,
        },
        NodeKind::Leaf { reason } => KindDto::Leaf {
            reason: reason.name().to_string(),
        },
    };
    NodeDto {
        id: node.id,
        parent: node.parent,
        added: node.added.iter().map(constraint_dto).collect(),
        kind,
    }
}

fn emit(doc: &Document) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents always serialize");
    out.push('\n');
    out
}

pub fn instance_to_json(inst: &Instance) -> String {
    emit(&Document {
        format_version: FORMAT_VERSION,
        instance: instance_dto(inst),
        proof: None,
    })
}

pub fn proof_to_json(tree: &ProofTree) -> String {
    emit(&Document {
        format_version: FORMAT_VERSION,
        instance: instance_dto(&tree.instance),
        proof: Some(ProofDto {
            mode: tree.mode.name().to_string(),
            root: tree.root,
            nodes: tree.nodes.iter().map(node_dto).collect(),
        }),
    })
}

// ---- parsing ----

fn rat(text: &str, field: &str) -> Result<Rational> {
    rational::parse(text).map_err(|_| schema(field, format!("not a rational: {text:?}")))
}

fn rats(values: &[String], len: usize, field: &str) -> Result<Vec<Rational>> {
    if values.len() != len {
        return Err(schema(field, format!("expected {len} entries, found {}", values.len())));
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| rat(v, &format!("{field}[{i}]")))
        .collect()
}

fn integer(text: &str, field: &str) -> Result<BigInt> {
    text.parse()
        .map_err(|_| schema(field, format!("not an integer: {text:?}")))
}

fn parse_constraint(c: &ConstraintDto, dim: usize, field: &str) -> Result<LinearConstraint> {
    let relation = Relation::from_symbol(&c.relation).ok_or_else(|| {
        schema(
            format!("{field}.relation"),
            format!("expected <=, >= or =, found {:?}", c.relation),
        )
    })?;
    Ok(LinearConstraint::new(
        rats(&c.coeffs, dim, &format!("{field}.coeffs"))?,
        relation,
        rat(&c.rhs, &format!("{field}.rhs"))?,
    ))
}

fn parse_instance(dto: &InstanceDto) -> Result<Instance> {
    let dim = dto.n_int + dto.n_cont;
    let constraints = dto
        .constraints
        .iter()
        .enumerate()
        .map(|(i, c)| parse_constraint(c, dim, &format!("instance.constraints[{i}]")))
        .collect::<Result<_>>()?;
    let goal = Goal::from_name(&dto.goal).ok_or_else(|| {
        schema("instance.goal", format!("unknown goal {:?}", dto.goal))
    })?;
    Instance::new(
        Polyhedron::new(dto.n_int, dto.n_cont, constraints)?,
        rats(&dto.objective, dim, "instance.objective")?,
        rat(&dto.bound, "instance.bound")?,
        goal,
    )
}

fn parse_disjunction(dto: &DisjunctionDto, inst: &Instance, field: &str) -> Result<Disjunction> {
    let (n_int, n_cont) = (inst.n_int(), inst.n_cont());
    let built = match dto {
        DisjunctionDto::Split { pi, pi0 } => make_split(
            &rats(pi, n_int + n_cont, &format!("{field}.pi"))?,
            &rat(pi0, &format!("{field}.pi0"))?,
            n_int,
            n_cont,
        ),
        DisjunctionDto::Variable { index, pi0 } => {
            if *index >= n_int {
                return Err(schema(
                    format!("{field}.index"),
                    format!("{index} is not an integer coordinate"),
                ));
            }
            let mut pi = rational::zeros(n_int + n_cont);
            pi[*index] = rational::int(1);
            make_split(&pi, &rat(pi0, &format!("{field}.pi0"))?, n_int, n_cont)
        }
        DisjunctionDto::Generic { index, intervals } => {
            let intervals = intervals
                .iter()
                .enumerate()
                .map(|(i, iv)| {
                    let f = format!("{field}.intervals[{i}]");
                    Ok(Interval {
                        lower: iv.lower.as_deref().map(|v| integer(v, &format!("{f}.lower"))).transpose()?,
                        upper: iv.upper.as_deref().map(|v| integer(v, &format!("{f}.upper"))).transpose()?,
                    })
                })
                .collect::<Result<_>>()?;
            make_interval_partition(
                IntervalPartition {
                    index: *index,
                    intervals,
                },
                n_int,
                n_cont,
            )
        }
    };
    built.map_err(|e| schema(field, e.to_string()))
}

fn parse_cut(dto: &CutDto, inst: &Instance, field: &str) -> Result<CuttingPlane> {
    let halfspace = parse_constraint(&dto.halfspace, inst.dim(), &format!("{field}.halfspace"))?;
    // Multiplier counts depend on the node's relaxation; the verifier checks them.
    let certificate = match &dto.certificate {
        CertificateDto::Cg { multipliers } => Certificate::Cg {
            multipliers: rats(multipliers, multipliers.len(), &format!("{field}.certificate.multipliers"))?,
        },
        CertificateDto::Disjunctive {
            disjunction,
            witnesses,
        } => Certificate::Disjunctive {
            disjunction: parse_disjunction(disjunction, inst, &format!("{field}.certificate.disjunction"))?,
            witnesses: witnesses
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    Ok(FarkasWitness {
                        multipliers: rats(w, w.len(), &format!("{field}.certificate.witnesses[{i}]"))?,
                    })
                })
                .collect::<Result<_>>()?,
        },
    };
    Ok(CuttingPlane {
        halfspace,
        certificate,
    })
}

fn parse_proof(dto: &ProofDto, instance: Instance) -> Result<ProofTree> {
    let mode = Mode::from_name(&dto.mode)
        .ok_or_else(|| schema("proof.mode", format!("unknown mode {:?}", dto.mode)))?;
    let count = dto.nodes.len();
    if count == 0 {
        return Err(schema("proof.nodes", "a proof has at least one node"));
    }
    let check_id = |id: usize, field: String| -> Result<()> {
        if id < count {
            Ok(())
        } else {
            Err(schema(field, format!("no node with id {id}")))
        }
    };
    check_id(dto.root, "proof.root".into())?;
    let mut nodes = Vec::with_capacity(count);
    for (i, n) in dto.nodes.iter().enumerate() {
        let f = format!("proof.nodes[{i}]");
        if n.id != i {
            return Err(schema(format!("{f}.id"), format!("expected id {i}, found {}", n.id)));
        }
        let added = n
            .added
            .iter()
            .enumerate()
            .map(|(k, c)| parse_constraint(c, instance.dim(), &format!("{f}.added[{k}]")))
            .collect::<Result<_>>()?;
        let kind = match &n.kind {
            KindDto::Open => NodeKind::Open,
            KindDto::Branch {
                disjunction,
                children,
            } => {
                for (k, &c) in children.iter().enumerate() {
                    check_id(c, format!("{f}.kind.children[{k}]"))?;
                }
                NodeKind::Branch {
                    disjunction: parse_disjunction(disjunction, &instance, &format!("{f}.kind.disjunction"))?,
                    children: children.clone(),
                }
            }
            KindDto::Cut { cut, child } => {
                check_id(*child, format!("{f}.kind.child"))?;
                NodeKind::Cut {
                    cut: parse_cut(cut, &instance, &format!("{f}.kind.cut"))?,
                    child: *child,
                }
            }
            KindDto::Leaf { reason } => NodeKind::Leaf {
                reason: LeafReason::from_name(reason).ok_or_else(|| {
                    schema(format!("{f}.kind.reason"), format!("unknown leaf reason {reason:?}"))
                })?,
            },
        };
        if let Some(p) = n.parent {
            check_id(p, format!("{f}.parent"))?;
        }
        nodes.push(ProofNode {
            id: i,
            parent: n.parent,
            added,
            kind,
            cached_lp: None,
        });
    }
    let tree = ProofTree {
        instance,
        nodes,
        root: dto.root,
        mode,
    };
    check_links(&tree)?;
    Ok(tree)
}

/// Parent pointers and child lists agree, and every node hangs off the root.
fn check_links(tree: &ProofTree) -> Result<()> {
    if tree.nodes[tree.root].parent.is_some() {
        return Err(schema(format!("proof.nodes[{}].parent", tree.root), "the root has a parent"));
    }
    let mut seen = vec![false; tree.nodes.len()];
    let mut stack = vec![tree.root];
    seen[tree.root] = true;
    while let Some(id) = stack.pop() {
        for c in tree.children(id) {
            if tree.nodes[c].parent != Some(id) {
                return Err(schema(
                    format!("proof.nodes[{c}].parent"),
                    format!("listed as a child of node {id}"),
                ));
            }
            if seen[c] {
                return Err(schema(format!("proof.nodes[{c}]"), "node is reached twice"));
            }
            seen[c] = true;
            stack.push(c);
        }
    }
    match seen.iter().position(|s| !s) {
        Some(i) => Err(schema(format!("proof.nodes[{i}]"), "node is not reachable from the root")),
        None => Ok(()),
    }
}

fn parse_document(text: &str) -> Result<Document> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.format_version != FORMAT_VERSION {
        return Err(schema(
            "format_version",
            format!("unsupported version {} (expected {FORMAT_VERSION})", doc.format_version),
        ));
    }
    Ok(doc)
}

/// The instance of an instance or proof document.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    parse_instance(&parse_document(text)?.instance)
}

pub fn proof_from_json(text: &str) -> Result<ProofTree> {
    let doc = parse_document(text)?;
    let proof = doc.proof.as_ref().ok_or_else(|| schema("proof", "missing field"))?;
    parse_proof(proof, parse_instance(&doc.instance)?)
}

/// Re-emits a document in canonical form: reduced rationals, fixed field
/// order, two-space indentation.
pub fn canonicalize(text: &str) -> Result<String> {
    let doc = parse_document(text)?;
    let instance = parse_instance(&doc.instance)?;
    Ok(match &doc.proof {
        Some(p) => proof_to_json(&parse_proof(p, instance)?),
        None => instance_to_json(&instance),
    })
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

pub fn read_proof(path: &Path) -> Result<ProofTree> {
    proof_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: &Path, inst: &Instance) -> Result<()> {
    Ok(std::fs::write(path, instance_to_json(inst))?)
}

pub fn write_proof(path: &Path, tree: &ProofTree) -> Result<()> {
    Ok(std::fs::write(path, proof_to_json(tree))?)
}
