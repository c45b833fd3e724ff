//! JSON instance documents.

use serde::{Deserialize, Serialize};

use super::{AgentId, AgentSpec, GridMap, Instance, Mode, TaskId, TaskSpec, Vertex, WorldError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentRecord {
    pub id: AgentId,
    pub start: Vertex,
    pub dest: Option<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub id: TaskId,
    pub loc: Vertex,
    pub assignees: Vec<AgentId>,
}

/// On-disk form of an [`Instance`]: the map is inlined as rows of `.`/`@`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub map: Vec<String>,
    pub agents: Vec<AgentRecord>,
    pub tasks: Vec<TaskRecord>,
    pub mode: Mode,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance) -> Self {
        InstanceFile {
            map: instance.map().to_rows(),
            agents: instance
                .agents()
                .iter()
                .map(|a| AgentRecord { id: a.id, start: a.start, dest: a.destination })
                .collect(),
            tasks: instance
                .tasks()
                .iter()
                .map(|t| TaskRecord { id: t.id, loc: t.location, assignees: t.assignees.clone() })
                .collect(),
            mode: instance.mode(),
        }
    }

    pub fn into_instance(self) -> Result<Instance, WorldError> {
        let map = GridMap::from_rows(&self.map)?;
        let agents = self
            .agents
            .into_iter()
            .map(|a| AgentSpec { id: a.id, start: a.start, destination: a.dest })
            .collect();
        let tasks = self
            .tasks
            .into_iter()
            .map(|t| TaskSpec { id: t.id, location: t.loc, assignees: t.assignees })
            .collect();
        Instance::new(map, agents, tasks, self.mode)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, WorldError> {
        serde_json::from_str(text).map_err(|e| WorldError::Format(e.to_string()))
    }
}

impl Instance {
    pub fn to_json(&self) -> String {
        InstanceFile::from_instance(self).to_json()
    }

    pub fn from_json(text: &str) -> Result<Instance, WorldError> {
        InstanceFile::from_json(text)?.into_instance()
    }
}
