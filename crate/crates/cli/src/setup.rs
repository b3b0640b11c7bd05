use std::fs;
use std::path::{Path, PathBuf};

use imperative::executor::{ActionRegistry, Simulation, DEFAULT_SEED};
use imperative::resolver::QuantifierTable;
use imperative::world::WorldState;

/// Files and seed that make up one simulation.
#[derive(Debug, Clone)]
pub struct Setup {
    pub world: PathBuf,
    pub actions: Option<PathBuf>,
    pub quantifiers: Option<PathBuf>,
    pub seed: u64,
}

impl Setup {
    pub fn new(world: impl Into<PathBuf>) -> Self {
        Self {
            world: world.into(),
            actions: None,
            quantifiers: None,
            seed: DEFAULT_SEED,
        }
    }

    pub fn load(&self) -> Result<Simulation, String> {
        let world = WorldState::load(&read(&self.world)?).map_err(|e| format!("{}: {e}", self.world.display()))?;
        let registry = match &self.actions {
            Some(p) => ActionRegistry::load(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?,
            None => ActionRegistry::default(),
        };
        let quantifiers = match &self.quantifiers {
            Some(p) => QuantifierTable::with_overrides(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?,
            None => QuantifierTable::default(),
        };
        Ok(Simulation::with_config(world, registry, quantifiers, self.seed))
    }
}

pub fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}
