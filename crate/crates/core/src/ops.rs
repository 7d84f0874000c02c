//! Operator definitions and the mutable operator table.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpType {
    Xfx,
    Xfy,
    Yfx,
    Fy,
    Fx,
    Xf,
    Yf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixity {
    Prefix,
    Infix,
    Postfix,
}

impl OpType {
    pub fn fixity(self) -> Fixity {
        match self {
            OpType::Xfx | OpType::Xfy | OpType::Yfx => Fixity::Infix,
            OpType::Fy | OpType::Fx => Fixity::Prefix,
            OpType::Xf | OpType::Yf => Fixity::Postfix,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OpType::Xfx => "xfx",
            OpType::Xfy => "xfy",
            OpType::Yfx => "yfx",
            OpType::Fy => "fy",
            OpType::Fx => "fx",
            OpType::Xf => "xf",
            OpType::Yf => "yf",
        }
    }
}

impl FromStr for OpType {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "xfx" => OpType::Xfx,
            "xfy" => OpType::Xfy,
            "yfx" => OpType::Yfx,
            "fy" => OpType::Fy,
            "fx" => OpType::Fx,
            "xf" => OpType::Xf,
            "yf" => OpType::Yf,
            _ => return Err(()),
        })
    }
}

impl fmt::Display for OpType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorDef {
    pub name: String,
    pub priority: u16,
    pub op_type: OpType,
}

impl OperatorDef {
    /// Maximum priority of the left operand (infix/postfix only).
    pub fn left_max(&self) -> u16 {
        match self.op_type {
            OpType::Yfx | OpType::Yf => self.priority,
            _ => self.priority - 1,
        }
    }

    /// Maximum priority of the right operand (infix/prefix only).
    pub fn right_max(&self) -> u16 {
        match self.op_type {
            OpType::Xfy | OpType::Fy => self.priority,
            _ => self.priority - 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Slots {
    prefix: Option<OperatorDef>,
    /// Infix or postfix; a name cannot be both at once.
    infix: Option<OperatorDef>,
}

/// Operator table keyed by atom name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorTable {
    ops: BTreeMap<String, Slots>,
}

const DEFAULTS: &[(u16, &str, &[&str])] = &[
    (1200, "xfx", &[":-", "-->"]),
    (1200, "fx", &[":-", "?-"]),
    (
        1150,
        "fx",
        &[
            "dynamic",
            "discontiguous",
            "initialization",
            "meta_predicate",
            "module_transparent",
            "multifile",
            "public",
            "thread_local",
            "table",
        ],
    ),
    (1100, "xfy", &[";", "|"]),
    (1050, "xfy", &["->", "*->"]),
    (1000, "xfy", &[","]),
    (990, "xfx", &[":="]),
    (900, "fy", &["\\+"]),
    (
        700,
        "xfx",
        &[
            "=", "\\=", "==", "\\==", "@<", "@>", "@=<", "@>=", "=..", "is", "=:=", "=\\=", "<",
            ">", "=<", ">=", ">:<", ":<", "as",
        ],
    ),
    (600, "xfy", &[":"]),
    (500, "yfx", &["+", "-", "/\\", "\\/", "xor"]),
    (
        400,
        "yfx",
        &["*", "/", "//", "rem", "mod", "div", "<<", ">>", "divmod", "rdiv"],
    ),
    (200, "xfx", &["**"]),
    (200, "xfy", &["^"]),
    (200, "fy", &["-", "+", "\\"]),
];

impl Default for OperatorTable {
    fn default() -> Self {
        OperatorTable::iso()
    }
}

impl OperatorTable {
    pub fn empty() -> OperatorTable {
        OperatorTable {
            ops: BTreeMap::new(),
        }
    }

    /// The ISO default table plus the common declaration prefix operators.
    pub fn iso() -> OperatorTable {
        let mut table = OperatorTable::empty();
        for (priority, ty, names) in DEFAULTS {
            let op_type: OpType = ty.parse().expect("valid default type");
            for name in *names {
                table.add(name, *priority, op_type);
            }
        }
        table
    }

    /// Define or (with priority 0) remove an operator.
    pub fn add(&mut self, name: &str, priority: u16, op_type: OpType) {
        let slots = self.ops.entry(name.to_string()).or_default();
        let def = (priority > 0).then(|| OperatorDef {
            name: name.to_string(),
            priority: priority.min(1200),
            op_type,
        });
        match op_type.fixity() {
            Fixity::Prefix => slots.prefix = def,
            Fixity::Infix | Fixity::Postfix => slots.infix = def,
        }
        if slots.prefix.is_none() && slots.infix.is_none() {
            self.ops.remove(name);
        }
    }

    pub fn prefix(&self, name: &str) -> Option<&OperatorDef> {
        self.ops.get(name).and_then(|s| s.prefix.as_ref())
    }

    pub fn infix(&self, name: &str) -> Option<&OperatorDef> {
        self.ops
            .get(name)
            .and_then(|s| s.infix.as_ref())
            .filter(|d| d.op_type.fixity() == Fixity::Infix)
    }

    pub fn postfix(&self, name: &str) -> Option<&OperatorDef> {
        self.ops
            .get(name)
            .and_then(|s| s.infix.as_ref())
            .filter(|d| d.op_type.fixity() == Fixity::Postfix)
    }

    pub fn is_op(&self, name: &str) -> bool {
        self.ops.contains_key(name)
    }

    /// Every active definition, sorted by name then fixity.
    pub fn defs(&self) -> Vec<OperatorDef> {
        self.ops
            .values()
            .flat_map(|s| s.prefix.iter().chain(s.infix.iter()).cloned())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let t = OperatorTable::iso();
        assert_eq!(t.infix(":-").unwrap().priority, 1200);
        assert_eq!(t.prefix(":-").unwrap().op_type, OpType::Fx);
        assert_eq!(t.infix(";").unwrap().op_type, OpType::Xfy);
        assert_eq!(t.infix(",").unwrap().priority, 1000);
        assert_eq!(t.infix("**").unwrap().op_type, OpType::Xfx);
        assert_eq!(t.prefix("-").unwrap().priority, 200);
        assert_eq!(t.infix("-").unwrap().op_type, OpType::Yfx);
    }

    #[test]
    fn one_infix_or_postfix_slot() {
        let mut t = OperatorTable::iso();
        t.add("===", 700, OpType::Xfx);
        assert!(t.infix("===").is_some());
        t.add("===", 100, OpType::Xf);
        assert!(t.infix("===").is_none());
        assert_eq!(t.postfix("===").unwrap().priority, 100);
        t.add("===", 0, OpType::Xf);
        assert!(!t.is_op("==="));
    }

    #[test]
    fn operand_limits() {
        let t = OperatorTable::iso();
        let comma = t.infix(",").unwrap();
        assert_eq!((comma.left_max(), comma.right_max()), (999, 1000));
        let minus = t.infix("-").unwrap();
        assert_eq!((minus.left_max(), minus.right_max()), (500, 499));
    }
}
