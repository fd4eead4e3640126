#pragma once

// Umbrella header for the IaC configuration optimizer library.

#include "iacopt/catalogue.hpp"
#include "iacopt/doml/archive.hpp"
#include "iacopt/doml/ast.hpp"
#include "iacopt/doml/emitter.hpp"
#include "iacopt/doml/lexer.hpp"
#include "iacopt/doml/parser.hpp"
#include "iacopt/moea/evolution.hpp"
#include "iacopt/oracle.hpp"
#include "iacopt/orchestrator.hpp"
#include "iacopt/problem.hpp"
