//! The matter side of the calculation, assembled once and shared by every
//! spectrum computed for it.

use serde::{Deserialize, Serialize};

use crate::aggregate::{AggregateSpec, SiteOperatorSet};
use crate::bath::{ExponentialSumCorrelation, SpectralDensity};
use crate::dephasing::{CouplingWeighting, DephasingTable};
use crate::error::Result;
use crate::polariton::{transform_operators, CavitySpec, PolaritonEigensystem, PolaritonOperators};

/// Everything that defines the matter model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatterParams {
    pub aggregate: AggregateSpec,
    pub cavity: CavitySpec,
    pub bath: crate::bath::PhononFile,
    #[serde(default)]
    pub weighting: CouplingWeighting,
}

impl MatterParams {
    pub fn placeholder() -> Self {
        MatterParams {
            aggregate: AggregateSpec::placeholder(),
            cavity: CavitySpec::default(),
            bath: SpectralDensity::placeholder().to_file(),
            weighting: CouplingWeighting::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MatterModel {
    pub params: MatterParams,
    pub sites: SiteOperatorSet,
    pub eigen: PolaritonEigensystem,
    pub operators: PolaritonOperators,
    pub bath: SpectralDensity,
    pub correlation: ExponentialSumCorrelation,
    pub dephasing: DephasingTable,
}

impl MatterModel {
    pub fn build(params: MatterParams) -> Result<Self> {
        params.cavity.validate()?;
        let bath = SpectralDensity::from_file(&params.bath)?;
        let sites = SiteOperatorSet::build(&params.aggregate)?;
        let eigen = PolaritonEigensystem::build(&sites, &params.cavity)?;
        let operators = transform_operators(&sites, &params.cavity, &eigen)?;
        let correlation = bath.correlation();
        let dephasing = DephasingTable::build(&eigen, &operators, &correlation, params.weighting)?;
        log::debug!(
            "matter model: dims {:?}, {} bath terms, dephasing {}",
            eigen.dims(),
            correlation.terms.len(),
            dephasing.fingerprint()
        );
        Ok(MatterModel {
            params,
            sites,
            eigen,
            operators,
            bath,
            correlation,
            dephasing,
        })
    }

    pub fn placeholder() -> Result<Self> {
        Self::build(MatterParams::placeholder())
    }
}
