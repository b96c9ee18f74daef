#pragma once

#include "aelif_lab/aelif.hpp"
#include "aelif_lab/checkpoint.hpp"
#include "aelif_lab/dataset.hpp"
#include "aelif_lab/denoiser.hpp"
#include "aelif_lab/errors.hpp"
#include "aelif_lab/features.hpp"
#include "aelif_lab/losses.hpp"
#include "aelif_lab/perturb.hpp"
#include "aelif_lab/pipeline.hpp"
#include "aelif_lab/report.hpp"
#include "aelif_lab/rng.hpp"
#include "aelif_lab/sampler.hpp"
#include "aelif_lab/schedule.hpp"
#include "aelif_lab/text_encoder.hpp"
#include "aelif_lab/train.hpp"
#include "aelif_lab/vec.hpp"
#include "aelif_lab/vocabulary.hpp"
#include "aelif_lab/wasserstein.hpp"
#include "aelif_lab/winrate.hpp"
