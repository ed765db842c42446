#pragma once

#include "qfst/analysis.hpp"
#include "qfst/builder.hpp"
#include "qfst/core.hpp"
#include "qfst/decide.hpp"
#include "qfst/io.hpp"
#include "qfst/matrix.hpp"
#include "qfst/oracle.hpp"
#include "qfst/qfa.hpp"
#include "qfst/relations.hpp"
#include "qfst/semantics.hpp"
#include "qfst/transforms.hpp"
#include "qfst/zoo.hpp"
