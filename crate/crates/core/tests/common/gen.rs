//! Seeded random models covering every element kind, nesting and odd text.

use fpd_core::{
    Characteristic, ConnectorKind, ConnectorNode, Flow, Identification, Model, Placement, Process, ProcessOperator,
    StateKind, StateNode, TechnicalResource, Usage,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMES: &[&str] = &[
    "Collar",
    "Rivet Position",
    "Screwed Collar",
    "A",
    "A",
    "in",
    "process",
    "",
    "x & y <z>",
    "quote \" inside",
    "back\\slash",
    "tab\there",
    "two\nlines",
    "  padded  ",
    "Ünïcödé ✓",
    "id",
    "st1",
];

const TEXT: &[&str] = &["", "", "", "1.0", "rev \"b\"", "long name", "a&b", "x\ny"];

struct Ids {
    next: usize,
    rng: ChaCha8Rng,
}

impl Ids {
    fn fresh(&mut self) -> String {
        self.next += 1;
        match self.rng.gen_range(0..5) {
            0 => format!(
                "_2021x_56901f2_{}_{}",
                1_698_910_860_000u64 + self.next as u64,
                self.next
            ),
            1 => format!("id {}", self.next),
            2 => format!("n{}", self.next),
            3 => format!("\"{}\" & <{}>", self.next, self.next),
            _ => format!("{}", self.next),
        }
    }
}

fn pick<'a>(rng: &mut impl Rng, from: &[&'a str]) -> &'a str {
    from.choose(rng).copied().unwrap()
}

fn identification(rng: &mut impl Rng, id: String) -> Identification {
    let mut ident = Identification::new(id, pick(rng, NAMES));
    ident.long_name = pick(rng, TEXT).to_owned();
    ident.version_number = pick(rng, TEXT).to_owned();
    ident.revision_number = pick(rng, TEXT).to_owned();
    for i in 0..rng.gen_range(0..3usize).saturating_sub(1) {
        ident.references.push(format!("ext:{i}/{}", pick(rng, NAMES)));
    }
    ident
}

fn characteristics(rng: &mut ChaCha8Rng, depth: usize) -> Vec<Characteristic> {
    let n = if depth > 2 {
        0
    } else {
        rng.gen_range(0..4usize).saturating_sub(1)
    };
    (0..n)
        .map(|i| Characteristic {
            identification: identification(rng, format!("c{i}")),
            value: pick(rng, TEXT).to_owned(),
            unit: pick(rng, &["", "Nm", "°C", "mm"]).to_owned(),
            children: characteristics(rng, depth + 1),
        })
        .collect()
}

/// A random model that builds. It is usually not rule compliant.
pub fn random_model(seed: u64) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids = Ids {
        next: 0,
        rng: ChaCha8Rng::seed_from_u64(seed ^ 0x5eed),
    };
    let n_proc = rng.gen_range(1..=3);
    let mut processes: Vec<Process> = Vec::new();
    for _ in 0..n_proc {
        let mut p = Process::new(ids.fresh(), pick(&mut rng, NAMES), ids.fresh());
        p.identification = identification(&mut rng, p.id().to_owned());
        if rng.gen_bool(0.2) {
            p.system_boundary_id = None;
        }
        for _ in 0..rng.gen_range(0..6) {
            let kind = *StateKind::ALL.choose(&mut rng).unwrap();
            let placement = if rng.gen_bool(0.3) {
                Placement::Intermediate
            } else {
                Placement::Boundary
            };
            let mut s = StateNode::new(ids.fresh(), "", kind, placement);
            s.identification = identification(&mut rng, s.id().to_owned());
            s.characteristics = characteristics(&mut rng, 0);
            p.states.push(s);
        }
        for _ in 0..rng.gen_range(0..4) {
            let mut o = ProcessOperator::new(ids.fresh(), "");
            o.identification = identification(&mut rng, o.id().to_owned());
            o.characteristics = characteristics(&mut rng, 0);
            p.operators.push(o);
        }
        for _ in 0..rng.gen_range(0..3) {
            let mut r = TechnicalResource::new(ids.fresh(), "");
            r.identification = identification(&mut rng, r.id().to_owned());
            r.characteristics = characteristics(&mut rng, 0);
            p.resources.push(r);
        }
        for _ in 0..rng.gen_range(0..3) {
            let kind = *ConnectorKind::ALL.choose(&mut rng).unwrap();
            let mut c = ConnectorNode::new(ids.fresh(), "", kind);
            c.identification = identification(&mut rng, c.id().to_owned());
            p.connectors.push(c);
        }

        let flow_nodes: Vec<String> = p
            .states
            .iter()
            .map(|s| s.id().to_owned())
            .chain(p.operators.iter().map(|o| o.id().to_owned()))
            .chain(p.connectors.iter().map(|c| c.id().to_owned()))
            .collect();
        if flow_nodes.len() >= 2 {
            for _ in 0..rng.gen_range(0..flow_nodes.len() * 2) {
                let a = flow_nodes.choose(&mut rng).unwrap().clone();
                let b = flow_nodes.choose(&mut rng).unwrap().clone();
                if a != b {
                    p.flows.push(Flow::new(ids.fresh(), a, b));
                }
            }
        }
        let all_nodes: Vec<String> = flow_nodes
            .iter()
            .cloned()
            .chain(p.resources.iter().map(|r| r.id().to_owned()))
            .collect();
        if !p.operators.is_empty() && !p.resources.is_empty() {
            for _ in 0..rng.gen_range(0..3) {
                let (op, res) = if rng.gen_bool(0.1) {
                    (
                        all_nodes.choose(&mut rng).unwrap().clone(),
                        all_nodes.choose(&mut rng).unwrap().clone(),
                    )
                } else {
                    (
                        p.operators.choose(&mut rng).unwrap().id().to_owned(),
                        p.resources.choose(&mut rng).unwrap().id().to_owned(),
                    )
                };
                p.usages.push(Usage::new(ids.fresh(), op, res));
            }
        }
        processes.push(p);
    }

    // Forward-only decompositions.
    for i in 0..processes.len() {
        for j in 0..processes[i].operators.len() {
            if i + 1 < processes.len() && rng.gen_bool(0.4) {
                let target = rng.gen_range(i + 1..processes.len());
                processes[i].operators[j].decomposition = Some(processes[target].id().to_owned());
            }
        }
    }
    for j in 0..processes.len() {
        let parent_states: Vec<String> = processes
            .iter()
            .filter(|p| {
                p.operators
                    .iter()
                    .any(|o| o.decomposition.as_deref() == Some(processes[j].id()))
            })
            .flat_map(|p| p.states.iter().map(|s| s.id().to_owned()))
            .collect();
        if parent_states.is_empty() {
            continue;
        }
        for s in &mut processes[j].states {
            if rng.gen_bool(0.5) {
                s.refines = Some(parent_states.choose(&mut rng).unwrap().clone());
            }
        }
    }
    Model::build(processes).expect("generated models are structurally sound")
}
