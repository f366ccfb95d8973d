#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "hextm/cli.hpp"
#include "hextm/datagen.hpp"
#include "hextm/errors.hpp"
#include "hextm/evalrunner.hpp"
#include "hextm/interpret.hpp"
#include "hextm/json_io.hpp"
#include "hextm/model_io.hpp"

namespace py = pybind11;
using namespace hextm;

namespace {

Polarity polarity_of(const std::string& s) {
  if (s == "positive") return Polarity::Positive;
  if (s == "negative") return Polarity::Negative;
  throw ContractViolation("polarity must be 'positive' or 'negative'");
}

}  // namespace

PYBIND11_MODULE(_hextm, m) {
  m.doc() = "Hex winner prediction with an interpretable Tsetlin Machine";

  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<InvalidEncoding>(m, "InvalidEncoding", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<RejectedMove>(m, "RejectedMove", PyExc_RuntimeError);
  py::register_exception<TerminalState>(m, "TerminalState", PyExc_RuntimeError);

  py::class_<Board>(m, "Board")
      .def(py::init<int>(), py::arg("size") = kDefaultBoardSize)
      .def_static("from_text", [](const std::string& t) { return parse_board_text(t); })
      .def_static("from_flat", [](const std::string& t) { return parse_flat(t); })
      .def("to_text", [](const Board& b) { return to_text(b); })
      .def("to_flat", [](const Board& b) { return to_flat(b); })
      .def("play", [](const Board& b, const std::string& cell) { return apply_move(b, parse_coord(cell, b.size())); },
           "Returns the board after the side to move plays at a cell such as 'd2'.")
      .def("winner", [](const Board& b) { return std::string(to_string(winner(b))); })
      .def("legal_moves",
           [](const Board& b) {
             std::vector<std::string> out;
             for (const auto& c : legal_moves(b)) out.push_back(coord_name(c));
             return out;
           })
      .def_property_readonly("move_count", &Board::move_count)
      .def_property_readonly("to_move", [](const Board& b) { return std::string(to_string(b.to_move())); })
      .def("__eq__", [](const Board& a, const Board& b) { return a == b; })
      .def("__repr__", [](const Board& b) { return "Board.from_flat('" + to_flat(b) + "')"; });

  m.def("encode", [](const Board& b) { return encode(b).to_bits(); }, "72-character feature bit string.");
  m.def("decode", [](const std::string& bits) { return decode(FeatureVector::from_bits(bits)); });

  py::class_<DatasetRecord>(m, "Record")
      .def_property_readonly("bits", [](const DatasetRecord& r) { return r.features.to_bits(); })
      .def_readonly("label", &DatasetRecord::label)
      .def_readonly("move_count", &DatasetRecord::move_count)
      .def("board", [](const DatasetRecord& r) { return decode(r.features); });

  m.def(
      "generate_dataset",
      [](int n_games, int playouts, int min_moves, int max_moves, std::uint64_t seed) {
        GenConfig c;
        c.n_games = n_games;
        c.playouts_per_move = playouts;
        c.min_moves = min_moves;
        c.max_moves = max_moves;
        c.seed = seed;
        return generate_dataset(c);
      },
      py::arg("n_games") = 1000, py::arg("playouts") = 50, py::arg("min_moves") = 2, py::arg("max_moves") = 22,
      py::arg("seed") = 1);
  m.def("read_dataset", [](const std::filesystem::path& p) { return read_dataset(p); });
  m.def("write_dataset", [](const std::vector<DatasetRecord>& r, const std::filesystem::path& p) { write_dataset(r, p); });

  py::class_<TMConfig>(m, "TMConfig")
      .def(py::init([](int n_clauses, std::optional<int> threshold, double s, int states, bool boost, bool weighted,
                       int max_weight, int epochs, std::uint64_t seed) {
             TMConfig c;
             c.n_clauses = n_clauses;
             c.threshold = threshold.value_or(static_cast<int>(std::llround(0.8 * n_clauses)));
             c.specificity = s;
             c.states_per_action = states;
             c.boost_true_positives = boost;
             c.weighted = weighted;
             c.max_weight = max_weight;
             c.epochs = epochs;
             c.seed = seed;
             c.validate();
             return c;
           }),
           py::arg("n_clauses") = 10000, py::arg("T") = py::none(), py::arg("s") = 100.0, py::arg("states") = 127,
           py::arg("boost") = false, py::arg("weighted") = false, py::arg("max_weight") = 255, py::arg("epochs") = 200,
           py::arg("seed") = 1)
      .def_readonly("n_clauses", &TMConfig::n_clauses)
      .def_readonly("T", &TMConfig::threshold)
      .def_readonly("s", &TMConfig::specificity)
      .def_readonly("epochs", &TMConfig::epochs)
      .def_readonly("weighted", &TMConfig::weighted);

  py::class_<ClauseBank>(m, "Model")
      .def(py::init([](const TMConfig& c) { return ClauseBank::initialized(c, 2 * kDefaultBoardSize * kDefaultBoardSize); }))
      .def_static("load", [](const std::filesystem::path& p) { return load_model(p); })
      .def("save", [](const ClauseBank& b, const std::filesystem::path& p) { save_model(b, p); })
      .def_property_readonly("config", &ClauseBank::config)
      .def(
          "fit",
          [](ClauseBank& b, const std::vector<DatasetRecord>& records, const std::function<void(int, double)>& cb) {
            const auto examples = to_examples(records);
            py::gil_scoped_release release;
            return fit(b, examples, cb ? EpochCallback([&](int e, double a) {
              py::gil_scoped_acquire acquire;
              cb(e, a);
            })
                                       : EpochCallback{})
                .epoch_accuracy;
          },
          py::arg("records"), py::arg("on_epoch") = nullptr, "Trains in place; returns per-epoch training accuracy.")
      .def("vote_sum", [](const ClauseBank& b, const Board& board) { return vote_sum(b, encode(board)); })
      .def("predict", [](const ClauseBank& b, const Board& board) { return prediction_json(predict(b, encode(board))).dump(); })
      .def("accuracy", [](const ClauseBank& b, const std::vector<DatasetRecord>& r) { return evaluate(b, r).overall.accuracy(); })
      .def("evaluate", [](const ClauseBank& b, const std::vector<DatasetRecord>& r) { return to_json(report_for(b, r)).dump(); })
      .def("interpret",
           [](const ClauseBank& b, const Board& board) { return heatmap_json(local_interpretation(b, board)).dump(); })
      .def(
          "top_clauses",
          [](const ClauseBank& b, const std::vector<DatasetRecord>& r, const std::string& polarity, int k, double alpha) {
            const Polarity p = polarity_of(polarity);
            return top_clauses_json(top_clauses(b, r, p, k, alpha), p, k, alpha).dump();
          },
          py::arg("records"), py::arg("polarity") = "positive", py::arg("k") = 10, py::arg("alpha") = 10.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args, const std::string& stdin_text) {
        std::istringstream in(stdin_text);
        std::ostringstream out, err;
        const int code = cli::run(args, in, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), py::arg("stdin") = "", "Runs the command line in-process; returns (exit code, stdout, stderr).");
}
