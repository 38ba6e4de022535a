//! All tensors of one defining function, computed in dependency order.

use crate::classify::Context;
use crate::curvature::{nabla_ricci_with, ricci, riemann_with, NablaRicci, RicciData, Riemann};
use crate::exec::Exec;
use crate::exprparse::{Mode, ProblemSpec};
use crate::symcore::{ArgSet, Jet, NormalForm};
use crate::walker::{christoffel_with, metric_from_function, Connection, MetricComponents, WalkerError};

#[derive(Clone, Debug)]
pub struct Analysis {
    pub context: Context,
    pub metric: MetricComponents,
    pub connection: Connection,
    pub riemann: Riemann,
    pub ricci: RicciData,
    pub nabla: NablaRicci,
}

/// `a(x1, x2, x3, x4)` as an unknown function.
pub fn general_function() -> NormalForm {
    NormalForm::jet(Jet::base("a", ArgSet::ALL))
}

/// `x1·b + x2·c + d` with `b, c, d` unknown functions of `(x3, x4)`.
pub fn restricted_function() -> NormalForm {
    let f = |n: &str| NormalForm::jet(Jet::base(n, ArgSet::from_coords(&[3, 4])));
    &(&(&NormalForm::coord(1) * &f("b")) + &(&NormalForm::coord(2) * &f("c"))) + &f("d")
}

impl Analysis {
    pub fn new(a: NormalForm, context: Context, exec: Exec) -> Result<Analysis, WalkerError> {
        let metric = metric_from_function(a)?;
        let connection = christoffel_with(&metric, exec);
        let riemann = riemann_with(&metric, &connection, exec);
        let ricci = ricci(&riemann, &metric);
        let nabla = nabla_ricci_with(&ricci.rho, &connection, exec);
        Ok(Analysis { context, metric, connection, riemann, ricci, nabla })
    }

    pub fn general(exec: Exec) -> Analysis {
        Analysis::new(general_function(), Context::General, exec).expect("Walker metrics are nondegenerate")
    }

    pub fn restricted(exec: Exec) -> Analysis {
        Analysis::new(restricted_function(), Context::Restricted, exec).expect("Walker metrics are nondegenerate")
    }

    /// Tensors of the problem's defining function, symbolic or concrete.
    pub fn from_spec(spec: &ProblemSpec, exec: Exec) -> Result<Analysis, WalkerError> {
        let context = match spec.mode {
            Mode::General => Context::General,
            Mode::Restricted => Context::Restricted,
        };
        Analysis::new(spec.defining_function()?, context, exec)
    }

    /// The symbolic analysis of the problem's family.
    pub fn of_family(context: Context, exec: Exec) -> Analysis {
        match context {
            Context::General => Analysis::general(exec),
            Context::Restricted => Analysis::restricted(exec),
        }
    }
}
