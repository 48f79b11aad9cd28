//! Everything built for one qubit count: phase space, bases, net.

use crate::error::Result;
use crate::field::FieldContext;
use crate::linalg::ComplexMatrix;
use crate::mub::{full_mub_set, MubSet};
use crate::operators::QubitLabeling;
use crate::phase_space::PhaseSpace;
use crate::tomography::{self, CountsRecord, MeasurementPlan, ReconstructionReport};
use crate::wigner::{self, NetConvention, QuantumNet, WignerGrid};

#[derive(Clone, Debug)]
pub struct QubitSystem {
    space: PhaseSpace,
    mubs: MubSet,
    net: QuantumNet,
}

impl QubitSystem {
    /// Default field, labeling and net for `n` qubits.
    pub fn new(n: u32) -> Result<Self> {
        let ctx = FieldContext::new(n)?;
        let labeling = QubitLabeling::default_for(&ctx)?;
        Self::with_labeling(labeling, NetConvention::Reference)
    }

    pub fn with_labeling(labeling: QubitLabeling, convention: NetConvention) -> Result<Self> {
        let space = PhaseSpace::new(labeling.field().clone());
        let mubs = full_mub_set(&space, &labeling)?;
        let net = QuantumNet::new(&space, &mubs, convention)?;
        Ok(QubitSystem { space, mubs, net })
    }

    pub fn qubits(&self) -> u32 {
        self.space.field().degree()
    }

    pub fn dim(&self) -> usize {
        self.space.order()
    }

    pub fn field(&self) -> &FieldContext {
        self.space.field()
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    /// The labeling actually in use, after any trace-dual fallback.
    pub fn labeling(&self) -> &QubitLabeling {
        &self.mubs.labeling
    }

    pub fn mubs(&self) -> &MubSet {
        &self.mubs
    }

    pub fn net(&self) -> &QuantumNet {
        &self.net
    }

    pub fn wigner(&self, rho: &ComplexMatrix) -> Result<WignerGrid> {
        wigner::wigner_from_state(rho, &self.net)
    }

    pub fn state(&self, grid: &WignerGrid) -> Result<ComplexMatrix> {
        wigner::state_from_wigner(grid, &self.net)
    }

    pub fn simulate(&self, rho: &ComplexMatrix, shots: u64, seed: u64) -> Result<CountsRecord> {
        tomography::simulate_counts(
            rho,
            &MeasurementPlan::new(&self.mubs, shots, seed),
            &self.mubs,
        )
    }

    pub fn reconstruct(
        &self,
        counts: &CountsRecord,
        project: bool,
        truth: Option<&ComplexMatrix>,
    ) -> Result<ReconstructionReport> {
        tomography::estimate_state(counts, &self.net, project, truth)
    }
}
