//! Per-field bundle: context, continued fraction, convergents, units and β map.

use std::sync::Arc;

use crate::cfrac::{CFData, ConvergentTable, Units};
use crate::error::Result;
use crate::indec::BetaIndexMap;
use crate::qfield::FieldCtx;

#[derive(Debug)]
pub struct Field {
    ctx: Arc<FieldCtx>,
    cf: Arc<CFData>,
    table: Arc<ConvergentTable>,
    units: Units,
    betas: BetaIndexMap,
}

impl Field {
    pub fn new(d: i64) -> Result<Arc<Field>> {
        let ctx = FieldCtx::new(d)?;
        Field::from_cf(CFData::expand(&ctx)?)
    }

    /// Builds the bundle from an already expanded (possibly cached) CF.
    pub fn from_cf(cf: CFData) -> Result<Arc<Field>> {
        let cf = Arc::new(cf);
        let table = Arc::new(ConvergentTable::new(Arc::clone(&cf)));
        let units = table.units()?;
        let betas = BetaIndexMap::new(Arc::clone(&table));
        Ok(Arc::new(Field {
            ctx: Arc::clone(cf.ctx()),
            cf,
            table,
            units,
            betas,
        }))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn d(&self) -> u64 {
        self.ctx.d()
    }

    pub fn cf(&self) -> &Arc<CFData> {
        &self.cf
    }

    pub fn table(&self) -> &Arc<ConvergentTable> {
        &self.table
    }

    pub fn units(&self) -> &Units {
        &self.units
    }

    pub fn betas(&self) -> &BetaIndexMap {
        &self.betas
    }
}
