#pragma once

#include "bethe.hpp"
#include "check.hpp"
#include "configuration.hpp"
#include "dense_matrix.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "generator.hpp"
#include "pair_matrix.hpp"
#include "pairalg.hpp"
#include "permutation.hpp"
#include "report.hpp"
#include "rule.hpp"
#include "scalar.hpp"
#include "scatter.hpp"
#include "series_oracle.hpp"
#include "tensor_operator.hpp"
#include "version.hpp"
#include "words.hpp"
