#pragma once

#include "reqdsl/backend.hpp"
#include "reqdsl/constraints.hpp"
#include "reqdsl/corpus.hpp"
#include "reqdsl/dsl.hpp"
#include "reqdsl/error.hpp"
#include "reqdsl/experiment.hpp"
#include "reqdsl/fewshot.hpp"
#include "reqdsl/grader.hpp"
#include "reqdsl/json_io.hpp"
#include "reqdsl/lexicon.hpp"
#include "reqdsl/service.hpp"
#include "reqdsl/text.hpp"
#include "reqdsl/translate.hpp"
#include "reqdsl/types.hpp"
