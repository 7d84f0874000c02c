//! Walking clause bodies through control constructs.

use crate::program::conjunction_goals;
use crate::term::Term;

/// `;`, `->`, `*->` and `|` in goal position.
pub fn is_branching(t: &Term) -> bool {
    t.is(";", 2) || t.is("->", 2) || t.is("*->", 2) || t.is("|", 2)
}

/// Any control construct the walkers descend into.
pub fn is_control(t: &Term) -> bool {
    is_branching(t) || t.is(",", 2) || t.is("\\+", 1)
}

pub fn is_cut(t: &Term) -> bool {
    t.is_atom("!")
}

/// A leaf goal and how deeply it is nested in branching control.
#[derive(Debug, Clone, Copy)]
pub struct Goal<'a> {
    pub term: &'a Term,
    pub depth: usize,
}

/// Non-control goals of a body in source order.
pub fn leaf_goals(body: &Term) -> Vec<Goal<'_>> {
    let mut out = Vec::new();
    collect_leaves(body, 0, &mut out);
    out
}

fn collect_leaves<'a>(t: &'a Term, depth: usize, out: &mut Vec<Goal<'a>>) {
    if t.is(",", 2) {
        collect_leaves(&t.args()[0], depth, out);
        collect_leaves(&t.args()[1], depth, out);
    } else if is_branching(t) {
        collect_leaves(&t.args()[0], depth + 1, out);
        collect_leaves(&t.args()[1], depth + 1, out);
    } else if t.is("\\+", 1) {
        collect_leaves(&t.args()[0], depth + 1, out);
    } else {
        out.push(Goal { term: t, depth });
    }
}

/// Every conjunction sequence of a body: the top level plus one per
/// control branch and per parenthesized subconjunction.
pub fn sequences(body: &Term) -> Vec<Vec<&Term>> {
    let mut out = Vec::new();
    collect_sequences(body, &mut out);
    out
}

fn collect_sequences<'a>(t: &'a Term, out: &mut Vec<Vec<&'a Term>>) {
    let seq = conjunction_goals(t);
    for &g in &seq {
        if g.is(",", 2) {
            collect_sequences(g, out);
        } else if is_branching(g) {
            for a in g.args() {
                collect_sequences(a, out);
            }
        } else if g.is("\\+", 1) {
            collect_sequences(&g.args()[0], out);
        }
    }
    out.insert(0, seq);
}

/// The goal that ends a body, looking into the last branch of a trailing
/// disjunction or if-then-else.
pub fn final_goal(body: &Term) -> &Term {
    let mut t = body;
    loop {
        if t.is(",", 2) || is_branching(t) {
            t = &t.args()[1];
        } else {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::OperatorTable;
    use crate::reader::parse_term;

    fn body(text: &str) -> Term {
        parse_term(text, &OperatorTable::iso()).unwrap()
    }

    #[test]
    fn leaves_with_depth() {
        let b = body("a, (b ; c -> d), \\+ e");
        let got: Vec<_> = leaf_goals(&b)
            .iter()
            .map(|g| (g.term.name().unwrap().to_string(), g.depth))
            .collect();
        let want = [("a", 0), ("b", 1), ("c", 2), ("d", 2), ("e", 1)];
        assert_eq!(got, want.map(|(n, d)| (n.to_string(), d)));
    }

    #[test]
    fn sequences_per_branch() {
        let b = body("a, (b, c ; d), e");
        let seqs: Vec<Vec<String>> = sequences(&b)
            .iter()
            .map(|s| s.iter().map(|g| g.to_canonical()).collect())
            .collect();
        assert_eq!(seqs[0].len(), 3);
        assert!(seqs.contains(&vec!["b".to_string(), "c".to_string()]));
        assert!(seqs.contains(&vec!["d".to_string()]));
    }

    #[test]
    fn final_goal_follows_else_branch() {
        assert!(is_cut(final_goal(&body("a, !"))));
        assert!(is_cut(final_goal(&body("a, (b -> c ; !)"))));
        assert!(!is_cut(final_goal(&body("\\+ !"))));
        assert!(!is_cut(final_goal(&body("findall(X, (p(X), !), L)"))));
    }
}
