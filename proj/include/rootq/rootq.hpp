#ifndef ROOTQ_ROOTQ_HPP
#define ROOTQ_ROOTQ_HPP

#include "rootq/core.hpp"
#include "rootq/name_parser.hpp"
#include "rootq/tld_registry.hpp"
#include "rootq/classifier.hpp"
#include "rootq/ingest.hpp"
#include "rootq/report.hpp"
#include "rootq/synth.hpp"
#include "rootq/cli.hpp"

#endif  // ROOTQ_ROOTQ_HPP
