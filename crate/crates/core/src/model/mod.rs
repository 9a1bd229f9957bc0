//! Domain types of the process model: tables, variables, the block tree and
//! per-task data annotations, plus the textual model format.
//!
//! A loaded model is immutable and fully resolved: every reference has been
//! checked, `init` states are normalized to `create`, and choice guards are
//! parsed and type-checked against the declared variables.

mod format;

pub use format::{load_model, save_model};

use std::fmt;

use thiserror::Error;

use crate::lang::Condition;
use crate::value::PrimitiveType;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("parse error at {line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("resolution error: {message}")]
    Resolution { message: String },
}

impl ModelError {
    pub fn resolution(message: impl Into<String>) -> ModelError {
        ModelError::Resolution {
            message: message.into(),
        }
    }
}

/// Object type: a primitive, or a semantic domain naming a declared table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemanticType {
    Primitive(PrimitiveType),
    Domain(String),
}

impl SemanticType {
    pub fn parse(text: &str) -> SemanticType {
        match PrimitiveType::parse(text) {
            Some(p) => SemanticType::Primitive(p),
            None => SemanticType::Domain(text.to_string()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            SemanticType::Primitive(p) => p.name().to_string(),
            SemanticType::Domain(t) => t.clone(),
        }
    }
}

impl fmt::Display for SemanticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    DataObject,
    DataStore,
    UserData,
    SystemData,
}

impl DataKind {
    pub fn parse(text: &str) -> Option<DataKind> {
        Some(match text {
            "data_object" => DataKind::DataObject,
            "data_store" => DataKind::DataStore,
            "user_data" => DataKind::UserData,
            "system_data" => DataKind::SystemData,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            DataKind::DataObject => "data_object",
            DataKind::DataStore => "data_store",
            DataKind::UserData => "user_data",
            DataKind::SystemData => "system_data",
        }
    }
}

/// Lifecycle annotation of a data node. `init` in source documents is an
/// alias normalized to `create` at load time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DataState {
    Read,
    Create,
    Update,
    Deleted,
    #[default]
    None,
}

impl DataState {
    pub fn parse(text: &str) -> Option<DataState> {
        Some(match text {
            "read" => DataState::Read,
            "create" | "init" => DataState::Create,
            "update" => DataState::Update,
            "deleted" => DataState::Deleted,
            "none" => DataState::None,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            DataState::Read => "read",
            DataState::Create => "create",
            DataState::Update => "update",
            DataState::Deleted => "deleted",
            DataState::None => "none",
        }
    }

    pub fn is_write(self) -> bool {
        matches!(self, DataState::Create | DataState::Update | DataState::Deleted)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub ty: SemanticType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Input,
    Output,
}

/// An activity input or output.
#[derive(Debug, Clone, PartialEq)]
pub struct DataNode {
    pub name: String,
    pub object_type: SemanticType,
    pub kind: DataKind,
    pub attributes: Vec<Attribute>,
    /// Multiple-instance flag; stored and validated, collections are plain
    /// row lists.
    pub multi: bool,
    /// Read-only flag, meaningful only for data stores.
    pub read_only: bool,
    pub state: DataState,
    pub direction: Direction,
}

impl DataNode {
    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    /// The table backing a data store node.
    pub fn table_name(&self) -> Option<&str> {
        match (&self.kind, &self.object_type) {
            (DataKind::DataStore, SemanticType::Domain(t)) => Some(t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationNode {
    pub id: String,
    pub expression: String,
}

/// Addresses a data node, one of its attributes, or an operation node
/// within the same task.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum NodeRef {
    Node(String),
    Attr(String, String),
    Op(String),
}

impl NodeRef {
    pub fn parse(text: &str) -> Option<NodeRef> {
        if let Some(op) = text.strip_prefix("op:") {
            if op.is_empty() {
                return None;
            }
            return Some(NodeRef::Op(op.to_string()));
        }
        match text.split_once('.') {
            Some((node, attr)) if !node.is_empty() && !attr.is_empty() => {
                Some(NodeRef::Attr(node.to_string(), attr.to_string()))
            }
            Some(_) => None,
            None => {
                if text.is_empty() {
                    None
                } else {
                    Some(NodeRef::Node(text.to_string()))
                }
            }
        }
    }

    pub fn node_name(&self) -> Option<&str> {
        match self {
            NodeRef::Node(n) | NodeRef::Attr(n, _) => Some(n),
            NodeRef::Op(_) => None,
        }
    }

    pub fn is_op(&self) -> bool {
        matches!(self, NodeRef::Op(_))
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeRef::Node(n) => f.write_str(n),
            NodeRef::Attr(n, a) => write!(f, "{n}.{a}"),
            NodeRef::Op(id) => write!(f, "op:{id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataflowEdge {
    pub src: NodeRef,
    pub dst: NodeRef,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub id: String,
    pub inputs: Vec<DataNode>,
    pub outputs: Vec<DataNode>,
    pub operations: Vec<OperationNode>,
    pub dataflow: Vec<DataflowEdge>,
}

impl Task {
    pub fn node(&self, name: &str) -> Option<&DataNode> {
        self.inputs
            .iter()
            .chain(self.outputs.iter())
            .find(|n| n.name == name)
    }

    pub fn operation(&self, id: &str) -> Option<&OperationNode> {
        self.operations.iter().find(|o| o.id == id)
    }

    /// Edges arriving at `dst`.
    pub fn incoming(&self, dst: &NodeRef) -> Vec<&DataflowEdge> {
        self.dataflow.iter().filter(|e| &e.dst == dst).collect()
    }

    /// Edges leaving `src`.
    pub fn outgoing(&self, src: &NodeRef) -> Vec<&DataflowEdge> {
        self.dataflow.iter().filter(|e| &e.src == src).collect()
    }
}

/// The block tree. Choices and parallel splits are binary; n-way splits
/// desugar into nested blocks.
#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    Task(Task),
    Sequence(Vec<Block>),
    ExclusiveChoice {
        guard: Condition,
        then_branch: Box<Block>,
        else_branch: Box<Block>,
    },
    DeferredChoice {
        first: Box<Block>,
        second: Box<Block>,
    },
    Parallel {
        first: Box<Block>,
        second: Box<Block>,
    },
}

impl Block {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Block::Task(_) => "task",
            Block::Sequence(_) => "sequence",
            Block::ExclusiveChoice { .. } => "exclusiveChoice",
            Block::DeferredChoice { .. } => "deferredChoice",
            Block::Parallel { .. } => "parallel",
        }
    }

    pub fn children(&self) -> Vec<(&'static str, &Block)> {
        match self {
            Block::Task(_) => Vec::new(),
            Block::Sequence(children) => children
                .iter()
                .enumerate()
                .map(|(i, b)| (seq_label(i), b))
                .collect(),
            Block::ExclusiveChoice {
                then_branch,
                else_branch,
                ..
            } => vec![("then", &**then_branch), ("else", &**else_branch)],
            Block::DeferredChoice { first, second } | Block::Parallel { first, second } => {
                vec![("0", &**first), ("1", &**second)]
            }
        }
    }
}

fn seq_label(i: usize) -> &'static str {
    // Sequence children are addressed by index; small indices cover any
    // realistic model, larger ones are still unique via leak-free interning.
    const LABELS: [&str; 16] = [
        "0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12", "13", "14", "15",
    ];
    LABELS.get(i).copied().unwrap_or("n")
}

/// Walks the block tree in preorder, yielding `(path, block)` pairs. Paths
/// are `/`-joined child labels below `root`.
pub fn walk_blocks(root: &Block) -> Vec<(String, &Block)> {
    let mut out = Vec::new();
    fn go<'a>(block: &'a Block, path: String, out: &mut Vec<(String, &'a Block)>) {
        out.push((path.clone(), block));
        for (label, child) in block.children() {
            go(child, format!("{path}/{label}"), out);
        }
    }
    go(root, "root".to_string(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableSchema {
    pub name: String,
    pub attributes: Vec<Attribute>,
    pub read_only: bool,
}

impl TableSchema {
    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    /// Column view with primitive types (enforced at load).
    pub fn columns(&self) -> Vec<(String, PrimitiveType)> {
        self.attributes
            .iter()
            .map(|a| match &a.ty {
                SemanticType::Primitive(p) => (a.name.clone(), *p),
                SemanticType::Domain(_) => unreachable!("table columns are primitive"),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessModel {
    pub name: String,
    pub tables: Vec<TableSchema>,
    pub variables: Vec<(String, PrimitiveType)>,
    pub root: Block,
}

impl ProcessModel {
    pub fn table(&self, name: &str) -> Option<&TableSchema> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn variable(&self, name: &str) -> Option<PrimitiveType> {
        self.variables
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| *t)
    }

    /// All tasks in preorder.
    pub fn tasks(&self) -> Vec<&Task> {
        walk_blocks(&self.root)
            .into_iter()
            .filter_map(|(_, b)| match b {
                Block::Task(t) => Some(t),
                _ => None,
            })
            .collect()
    }

    pub fn task(&self, id: &str) -> Option<&Task> {
        self.tasks().into_iter().find(|t| t.id == id)
    }
}

/// All data node occurrences (across every task) with kind `data_store`:
/// the persistent data of the process.
pub fn derive_persistent_set(model: &ProcessModel) -> Vec<&DataNode> {
    nodes_of_kind(model, DataKind::DataStore)
}

/// All data node occurrences with kind `data_object`: the volatile data.
pub fn derive_volatile_set(model: &ProcessModel) -> Vec<&DataNode> {
    nodes_of_kind(model, DataKind::DataObject)
}

fn nodes_of_kind(model: &ProcessModel, kind: DataKind) -> Vec<&DataNode> {
    model
        .tasks()
        .into_iter()
        .flat_map(|t| t.inputs.iter().chain(t.outputs.iter()))
        .filter(|n| n.kind == kind)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store_node(name: &str, table: &str, direction: Direction) -> DataNode {
        DataNode {
            name: name.into(),
            object_type: SemanticType::Domain(table.into()),
            kind: DataKind::DataStore,
            attributes: Vec::new(),
            multi: false,
            read_only: false,
            state: DataState::Read,
            direction,
        }
    }

    fn object_node(name: &str) -> DataNode {
        DataNode {
            name: name.into(),
            object_type: SemanticType::Primitive(PrimitiveType::Double),
            kind: DataKind::DataObject,
            attributes: Vec::new(),
            multi: false,
            read_only: false,
            state: DataState::None,
            direction: Direction::Output,
        }
    }

    fn model_with_tasks(tasks: Vec<Task>) -> ProcessModel {
        ProcessModel {
            name: "m".into(),
            tables: Vec::new(),
            variables: Vec::new(),
            root: Block::Sequence(tasks.into_iter().map(Block::Task).collect()),
        }
    }

    #[test]
    fn persistent_set_collects_data_store_occurrences() {
        let t1 = Task {
            id: "a".into(),
            inputs: vec![store_node("offers", "Offers", Direction::Input)],
            outputs: vec![store_node("candidate", "Candidate", Direction::Output)],
            operations: Vec::new(),
            dataflow: Vec::new(),
        };
        let m = model_with_tasks(vec![t1]);
        let p = derive_persistent_set(&m);
        let names: Vec<&str> = p.iter().map(|n| n.name.as_str()).collect();
        assert_eq!(names, ["offers", "candidate"]);
    }

    #[test]
    fn duplicated_store_input_counts_per_occurrence() {
        // The sets range over node occurrences, not names: a store read by
        // two tasks appears twice. Oracle: enumerate all task inputs and
        // outputs and filter by kind.
        let mk = |id: &str| Task {
            id: id.into(),
            inputs: vec![store_node("offers", "Offers", Direction::Input)],
            outputs: Vec::new(),
            operations: Vec::new(),
            dataflow: Vec::new(),
        };
        let m = model_with_tasks(vec![mk("a"), mk("b")]);
        assert_eq!(derive_persistent_set(&m).len(), 2);
        assert!(derive_volatile_set(&m).is_empty());
    }

    #[test]
    fn volatile_set_is_data_objects_only() {
        let t = Task {
            id: "t".into(),
            inputs: vec![store_node("offers", "Offers", Direction::Input)],
            outputs: vec![object_node("finalDecision")],
            operations: Vec::new(),
            dataflow: Vec::new(),
        };
        let m = model_with_tasks(vec![t]);
        let v = derive_volatile_set(&m);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].name, "finalDecision");
        // Disjointness with the persistent set.
        let p = derive_persistent_set(&m);
        assert!(p.iter().all(|n| n.name != "finalDecision"));
    }

    #[test]
    fn walk_paths_are_stable() {
        let m = ProcessModel {
            name: "m".into(),
            tables: Vec::new(),
            variables: vec![("x".into(), PrimitiveType::Int)],
            root: Block::Sequence(vec![
                Block::Task(Task {
                    id: "a".into(),
                    inputs: vec![],
                    outputs: vec![],
                    operations: vec![],
                    dataflow: vec![],
                }),
                Block::Parallel {
                    first: Box::new(Block::Task(Task {
                        id: "b".into(),
                        inputs: vec![],
                        outputs: vec![],
                        operations: vec![],
                        dataflow: vec![],
                    })),
                    second: Box::new(Block::Task(Task {
                        id: "c".into(),
                        inputs: vec![],
                        outputs: vec![],
                        operations: vec![],
                        dataflow: vec![],
                    })),
                },
            ]),
        };
        let paths: Vec<String> = walk_blocks(&m.root).into_iter().map(|(p, _)| p).collect();
        assert_eq!(
            paths,
            ["root", "root/0", "root/1", "root/1/0", "root/1/1"]
        );
    }
}
