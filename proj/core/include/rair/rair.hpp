#pragma once

#include "rair/config.hpp"
#include "rair/corpus.hpp"
#include "rair/dataset_io.hpp"
#include "rair/embedding.hpp"
#include "rair/errors.hpp"
#include "rair/llm.hpp"
#include "rair/metrics.hpp"
#include "rair/parallel.hpp"
#include "rair/pipeline.hpp"
#include "rair/reflection.hpp"
#include "rair/retriever.hpp"
#include "rair/task.hpp"
#include "rair/templates.hpp"
#include "rair/text.hpp"
#include "rair/training.hpp"
