#pragma once

// Umbrella header for the financial risk meter toolkit.

#include "frm/analysis.hpp"
#include "frm/csv.hpp"
#include "frm/dates.hpp"
#include "frm/econ/adf.hpp"
#include "frm/econ/cointegration.hpp"
#include "frm/econ/crosscorr.hpp"
#include "frm/econ/distributions.hpp"
#include "frm/econ/granger.hpp"
#include "frm/econ/ols.hpp"
#include "frm/econ/report.hpp"
#include "frm/econ/residual_tests.hpp"
#include "frm/econ/spline.hpp"
#include "frm/econ/var.hpp"
#include "frm/errors.hpp"
#include "frm/ingest.hpp"
#include "frm/panel.hpp"
#include "frm/pipeline.hpp"
#include "frm/riskmeter.hpp"
#include "frm/solver.hpp"
