//! Argument derivation: atomic arguments for formulas and rules, then
//! modus ponens to a fixpoint.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::annotation::{AnnotatedDocument, ComponentKind};
use crate::diagnostics::Warning;
use crate::ekb::{Ekb, ElementId, InferenceRule};
use crate::ids::natural_cmp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ArgumentKind {
    P,
    IRP,
    C,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "ids")]
pub enum Content {
    Formula(ElementId),
    Rule(ElementId),
    /// Several formulas presented as one argument (merged major claims).
    Merged(Vec<ElementId>),
}

impl Content {
    pub fn elements(&self) -> Vec<&ElementId> {
        match self {
            Content::Formula(id) | Content::Rule(id) => vec![id],
            Content::Merged(ids) => ids.iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Argument {
    pub arg_id: String,
    pub kind: ArgumentKind,
    pub content: Content,
    /// Rendered content: the formula text, `φ ⇒ ψ`, or `A2, A1 ⊢ ψ`.
    pub text: String,
    pub implicit: bool,
    /// Prem: the premise formulas the argument rests on.
    pub premises: BTreeSet<ElementId>,
    /// Conc: the concluded formula or rule.
    pub conclusion: ElementId,
    /// Sub: transitive sub-arguments including the argument itself, in id order.
    pub subargs: Vec<String>,
    pub top_rule: Option<ElementId>,
}

impl Argument {
    pub fn is_derived(&self) -> bool {
        self.top_rule.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MpApplication {
    pub rule_arg: String,
    pub antecedent_args: Vec<String>,
    pub result_arg: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ArgumentSet {
    pub arguments: Vec<Argument>,
    pub mp_applications: Vec<MpApplication>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArgumentError {
    #[error("antecedent arguments for rule {rule} conclude {got:?}, expected {expected:?}")]
    AntecedentMismatch { rule: String, expected: Vec<String>, got: Vec<String> },
    #[error("argument {0} is not an inference-rule argument")]
    NotARule(String),
    #[error("unknown argument {0}")]
    UnknownArgument(String),
}

impl ArgumentSet {
    pub fn get(&self, arg_id: &str) -> Option<&Argument> {
        self.arguments.iter().find(|a| a.arg_id == arg_id)
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    /// The argument whose content includes formula or rule `id`.
    pub fn argument_for(&self, id: &ElementId) -> Option<&Argument> {
        self.arguments.iter().find(|a| a.content.elements().contains(&id))
    }

    pub fn ids(&self) -> Vec<String> {
        self.arguments.iter().map(|a| a.arg_id.clone()).collect()
    }

    /// Transitive closure of Sub, self-inclusive, in id order.
    pub fn subarguments(&self, arg_id: &str) -> Result<Vec<&Argument>, ArgumentError> {
        let arg = self.get(arg_id).ok_or_else(|| ArgumentError::UnknownArgument(arg_id.to_string()))?;
        arg.subargs
            .iter()
            .map(|id| self.get(id).ok_or_else(|| ArgumentError::UnknownArgument(id.clone())))
            .collect()
    }
}

/// Derive the argument concluding a rule's consequent from the rule argument
/// and one argument per antecedent.
pub fn apply_modus_ponens(
    ekb: &Ekb,
    rule_arg: &Argument,
    antecedent_args: &[&Argument],
    arg_id: &str,
) -> Result<Argument, ArgumentError> {
    let rule = match (&rule_arg.kind, &rule_arg.content) {
        (ArgumentKind::IRP, Content::Rule(id)) => ekb.rule(id),
        _ => None,
    }
    .ok_or_else(|| ArgumentError::NotARule(rule_arg.arg_id.clone()))?;
    let mut expected: Vec<String> = rule.antecedents.iter().map(ToString::to_string).collect();
    let mut got: Vec<String> = antecedent_args.iter().map(|a| a.conclusion.to_string()).collect();
    expected.sort();
    got.sort();
    if expected != got {
        return Err(ArgumentError::AntecedentMismatch { rule: rule.id.to_string(), expected, got });
    }

    let premises = antecedent_args.iter().flat_map(|a| a.premises.iter().cloned()).collect();
    let mut subargs: Vec<String> = antecedent_args
        .iter()
        .flat_map(|a| a.subargs.iter().cloned())
        .chain([rule_arg.arg_id.clone(), arg_id.to_string()])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    subargs.sort_by(|a, b| natural_cmp(a, b));
    let consequent = ekb.formula(&rule.consequent);
    let kind = match consequent.map(|f| f.component_kind) {
        Some(ComponentKind::Premise) => ArgumentKind::P,
        _ => ArgumentKind::C,
    };
    let mut refs = vec![rule_arg.arg_id.as_str()];
    refs.extend(antecedent_args.iter().map(|a| a.arg_id.as_str()));
    let text = format!("{} ⊢ {}", refs.join(", "), ekb.element_text(&rule.consequent).unwrap_or_default());
    Ok(Argument {
        arg_id: arg_id.to_string(),
        kind,
        content: Content::Formula(rule.consequent.clone()),
        text,
        implicit: consequent.is_some_and(|f| f.implicit),
        premises,
        conclusion: rule.consequent.clone(),
        subargs,
        top_rule: Some(rule.id.clone()),
    })
}

/// P when the consequent is annotated as a premise or feeds another rule,
/// C otherwise.
pub fn classify_consequent_role(consequent: &ElementId, doc: &AnnotatedDocument, feeds_further_rule: bool) -> ArgumentKind {
    match doc.component(consequent.as_str()).map(|c| c.kind) {
        Some(ComponentKind::Premise) => ArgumentKind::P,
        _ if feeds_further_rule => ArgumentKind::P,
        _ => ArgumentKind::C,
    }
}

struct Node {
    content: Content,
    /// `(rule node, antecedent nodes)`; empty for atomic nodes.
    apps: Vec<(usize, Vec<usize>)>,
}

/// Build every argument: atomic arguments for rules and for formulas no rule
/// concludes, then derived arguments until no rule fires.
pub fn derive_argument_set(ekb: &Ekb, doc: &AnnotatedDocument) -> ArgumentSet {
    derive_argument_set_with_warnings(ekb, doc).0
}

pub fn derive_argument_set_with_warnings(ekb: &Ekb, doc: &AnnotatedDocument) -> (ArgumentSet, Vec<Warning>) {
    let mut warnings = Vec::new();
    let consequents: BTreeSet<&ElementId> = ekb.rules.iter().map(|r| &r.consequent).collect();
    let mut nodes: Vec<Node> = Vec::new();
    let mut by_element: HashMap<ElementId, usize> = HashMap::new();

    let major: Vec<ElementId> = ekb
        .formulas
        .iter()
        .filter(|f| f.component_kind == ComponentKind::MajorClaim && !consequents.contains(&f.id))
        .map(|f| f.id.clone())
        .collect();
    for f in &ekb.formulas {
        if consequents.contains(&f.id) || major.contains(&f.id) {
            continue;
        }
        by_element.insert(f.id.clone(), nodes.len());
        nodes.push(Node { content: Content::Formula(f.id.clone()), apps: vec![] });
    }
    for r in &ekb.rules {
        by_element.insert(r.id.clone(), nodes.len());
        nodes.push(Node { content: Content::Rule(r.id.clone()), apps: vec![] });
    }

    let mut fired = vec![false; ekb.rules.len()];
    loop {
        let mut progress = false;
        for (i, rule) in ekb.rules.iter().enumerate() {
            if fired[i] {
                continue;
            }
            let Some(ants) = rule.antecedents.iter().map(|a| by_element.get(a).copied()).collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            fired[i] = true;
            progress = true;
            let rule_node = by_element[&rule.id];
            match by_element.get(&rule.consequent).copied() {
                None => {
                    by_element.insert(rule.consequent.clone(), nodes.len());
                    nodes.push(Node { content: Content::Formula(rule.consequent.clone()), apps: vec![(rule_node, ants)] });
                }
                Some(existing) if !nodes[existing].apps.is_empty() && !ants.iter().any(|a| depends_on(&nodes, *a, existing)) => {
                    nodes[existing].apps.push((rule_node, ants));
                }
                Some(_) => {
                    log::warn!("rule {} concludes an atomic argument; derivation skipped", rule.id);
                    warnings.push(Warning::BlockedDerivation { rule: rule.id.to_string() });
                }
            }
        }
        if progress {
            continue;
        }
        // A cycle among rule consequents: the earliest pending consequent
        // enters as an atomic argument.
        let pending = ekb
            .formulas
            .iter()
            .find(|f| !by_element.contains_key(&f.id) && consequents.contains(&f.id) && !major.contains(&f.id));
        match pending {
            Some(f) => {
                by_element.insert(f.id.clone(), nodes.len());
                nodes.push(Node { content: Content::Formula(f.id.clone()), apps: vec![] });
            }
            None => break,
        }
    }
    let major_node = match major.len() {
        0 => None,
        1 => Some(Content::Formula(major[0].clone())),
        _ => Some(Content::Merged(major.clone())),
    }
    .map(|content| {
        for id in &major {
            by_element.insert(id.clone(), nodes.len());
        }
        nodes.push(Node { content, apps: vec![] });
        nodes.len() - 1
    });

    let feeds: BTreeSet<&ElementId> = ekb.rules.iter().flat_map(|r| r.antecedents.iter()).collect();
    let kind_of = |n: &Node| match &n.content {
        Content::Rule(_) => ArgumentKind::IRP,
        Content::Merged(_) => ArgumentKind::C,
        Content::Formula(id) if !n.apps.is_empty() => classify_consequent_role(id, doc, feeds.contains(id)),
        Content::Formula(id) => match ekb.formula(id).map(|f| f.component_kind) {
            Some(ComponentKind::Premise) => ArgumentKind::P,
            _ => ArgumentKind::C,
        },
    };

    // Ids follow the text: by paragraph, premises and rules before
    // conclusions, then by position; the major claim closes the set.
    let sort_key = |i: usize| {
        let n = &nodes[i];
        let (paragraph, position) = match &n.content {
            Content::Rule(id) => {
                let rule = ekb.rule(id).expect("rule node");
                match rule.anchor {
                    Some(a) => (doc.document.paragraph_of(a.start), Some(a.start)),
                    None => formula_position(ekb, &rule.consequent),
                }
            }
            Content::Formula(id) => formula_position(ekb, id),
            Content::Merged(_) => (None, None),
        };
        (
            Some(i) == major_node,
            paragraph.unwrap_or(usize::MAX),
            kind_of(n) == ArgumentKind::C,
            position.unwrap_or(usize::MAX),
            i,
        )
    };
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by_key(|&i| sort_key(i));
    let mut ids = vec![String::new(); nodes.len()];
    for (rank, &i) in order.iter().enumerate() {
        ids[i] = format!("A{}", rank + 1);
    }

    let mut args: Vec<Option<Argument>> = vec![None; nodes.len()];
    for (i, n) in nodes.iter().enumerate() {
        let arg = match n.apps.first() {
            Some((rule_node, ants)) => {
                let rule_arg = args[*rule_node].as_ref().expect("rule argument precedes its application");
                let ant_args: Vec<&Argument> =
                    ants.iter().map(|a| args[*a].as_ref().expect("antecedent precedes its application")).collect();
                let mut a = apply_modus_ponens(ekb, rule_arg, &ant_args, &ids[i]).expect("antecedents cover the rule");
                a.kind = kind_of(n);
                a
            }
            None => atomic_argument(ekb, &n.content, &ids[i], kind_of(n)),
        };
        args[i] = Some(arg);
    }
    let mut args: Vec<Argument> = args.into_iter().map(|a| a.expect("materialized")).collect();

    // Recompute Prem and Sub over all applications, including secondary ones.
    for i in 0..nodes.len() {
        let (prem, sub) = closure(&nodes, &args, i);
        args[i].premises = prem;
        let mut sub: Vec<String> = sub.into_iter().map(|j| ids[j].clone()).collect();
        sub.sort_by(|a, b| natural_cmp(a, b));
        args[i].subargs = sub;
    }

    let mut mp_applications: Vec<(usize, MpApplication)> = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        for (rule_node, ants) in &n.apps {
            mp_applications.push((
                order.iter().position(|&o| o == i).expect("ordered"),
                MpApplication {
                    rule_arg: ids[*rule_node].clone(),
                    antecedent_args: ants.iter().map(|a| ids[*a].clone()).collect(),
                    result_arg: ids[i].clone(),
                },
            ));
        }
    }
    mp_applications.sort_by_key(|(rank, _)| *rank);

    let arguments = order.iter().map(|&i| args[i].clone()).collect();
    let aset = ArgumentSet { arguments, mp_applications: mp_applications.into_iter().map(|(_, m)| m).collect() };
    (aset, warnings)
}

fn formula_position(ekb: &Ekb, id: &ElementId) -> (Option<usize>, Option<usize>) {
    match ekb.formula(id) {
        Some(f) => (f.paragraph, f.span.map(|s| s.start)),
        None => (None, None),
    }
}

fn depends_on(nodes: &[Node], from: usize, target: usize) -> bool {
    if from == target {
        return true;
    }
    nodes[from].apps.iter().any(|(r, ants)| depends_on(nodes, *r, target) || ants.iter().any(|a| depends_on(nodes, *a, target)))
}

fn closure(nodes: &[Node], args: &[Argument], i: usize) -> (BTreeSet<ElementId>, BTreeSet<usize>) {
    let mut sub = BTreeSet::from([i]);
    if nodes[i].apps.is_empty() {
        return (args[i].premises.clone(), sub);
    }
    let mut prem = BTreeSet::new();
    for (rule_node, ants) in &nodes[i].apps {
        sub.insert(*rule_node);
        for &a in ants {
            let (p, s) = closure(nodes, args, a);
            prem.extend(p);
            sub.extend(s);
        }
    }
    (prem, sub)
}

fn atomic_argument(ekb: &Ekb, content: &Content, arg_id: &str, kind: ArgumentKind) -> Argument {
    let elements = content.elements();
    let text: Vec<String> = elements.iter().filter_map(|id| ekb.element_text(id)).collect();
    let premises = match content {
        Content::Rule(_) => BTreeSet::new(),
        _ => elements.iter().map(|id| (*id).clone()).collect(),
    };
    Argument {
        arg_id: arg_id.to_string(),
        kind,
        content: content.clone(),
        text: text.join("; "),
        implicit: elements.iter().all(|id| ekb.formula(id).is_some_and(|f| f.implicit)),
        premises,
        conclusion: elements[0].clone(),
        subargs: vec![arg_id.to_string()],
        top_rule: None,
    }
}

/// Rule id to argument id, for rendering preference sets over arguments.
pub fn rule_argument_ids(aset: &ArgumentSet) -> BTreeMap<ElementId, String> {
    aset.arguments
        .iter()
        .filter_map(|a| match &a.content {
            Content::Rule(id) => Some((id.clone(), a.arg_id.clone())),
            _ => None,
        })
        .collect()
}

/// The rule an IRP argument stands for.
pub fn rule_of<'a>(ekb: &'a Ekb, arg: &Argument) -> Option<&'a InferenceRule> {
    match &arg.content {
        Content::Rule(id) => ekb.rule(id),
        _ => None,
    }
}
