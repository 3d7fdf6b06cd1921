#include "spoilage/nnet/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "spoilage/errors.hpp"
#include "spoilage/text.hpp"

namespace spoilage::nnet {

namespace {

constexpr int kFormatVersion = 1;

void write_array(std::ostream& out, const char* name, const Matrix& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols();
  for (Eigen::Index i = 0; i < m.size(); ++i) out << ' ' << format_exact(m.data()[i]);
  out << '\n';
}

void write_array(std::ostream& out, const char* name, const Vector& v) {
  out << name << ' ' << v.size() << " 1";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_exact(v[i]);
  out << '\n';
}

std::string token(std::istream& in, const char* what) {
  std::string t;
  if (!(in >> t)) throw CorruptCheckpoint(std::string("truncated before ") + what);
  return t;
}

void expect(std::istream& in, const std::string& word) {
  const std::string t = token(in, word.c_str());
  if (t != word) throw CorruptCheckpoint("expected '" + word + "', found '" + t + "'");
}

long long integer(std::istream& in, const char* what) {
  const std::string t = token(in, what);
  const auto v = parse_integer(t);
  if (!v || *v < 0) throw CorruptCheckpoint(std::string("bad ") + what + " '" + t + "'");
  return *v;
}

double real(std::istream& in) {
  const std::string t = token(in, "value");
  const auto v = parse_double(t);
  if (!v) throw CorruptCheckpoint("bad value '" + t + "'");
  return *v;
}

template <class M>
void read_array(std::istream& in, const char* name, M& target) {
  expect(in, name);
  const auto rows = integer(in, "rows");
  const auto cols = integer(in, "cols");
  if (rows != target.rows() || cols != target.cols()) {
    throw CorruptCheckpoint(std::string("array '") + name + "' has unexpected dimensions");
  }
  for (Eigen::Index i = 0; i < target.size(); ++i) target.data()[i] = real(in);
}

}  // namespace

std::string activation_name(Activation activation) {
  switch (activation) {
    case Activation::Identity:
      return "identity";
    case Activation::Tanh:
      return "tanh";
    case Activation::Relu:
      return "relu";
  }
  return "identity";
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::Identity;
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::Relu;
  throw CorruptCheckpoint("unknown activation '" + name + "'");
}

Topology topology_from_name(const std::string& name) {
  for (Topology t : {Topology::Hybrid, Topology::LstmOnly, Topology::RnnOnly, Topology::Ann}) {
    if (name == topology_name(t)) return t;
  }
  throw InvalidConfig("unknown topology '" + name + "'");
}

void write_qnetwork(std::ostream& out, const QNetworkParams& params) {
  out << "qnetwork " << kFormatVersion << '\n';
  out << "topology " << topology_name(params.topology) << '\n';
  out << "layers " << params.layers.size() << '\n';
  for (const auto& layer : params.layers) {
    if (const auto* l = std::get_if<LstmParams>(&layer)) {
      out << "lstm " << l->input_size() << ' ' << l->hidden_size() << ' '
          << (l->output_peephole == OutputPeephole::CurrentCell ? "current" : "previous") << '\n';
      write_array(out, "w_x", l->w_x);
      write_array(out, "w_h", l->w_h);
      write_array(out, "w_c", l->w_c);
      write_array(out, "b", l->b);
    } else if (const auto* r = std::get_if<RnnParams>(&layer)) {
      out << "rnn " << r->input_size() << ' ' << r->hidden_size() << ' '
          << activation_name(r->activation) << '\n';
      write_array(out, "w_x", r->w_x);
      write_array(out, "w_h", r->w_h);
      write_array(out, "b", r->b);
    } else {
      const auto& d = std::get<DenseParams>(layer);
      out << "dense " << d.input_size() << ' ' << d.output_size() << ' '
          << activation_name(d.activation) << '\n';
      write_array(out, "w", d.w);
      write_array(out, "b", d.b);
    }
  }
}

QNetworkParams read_qnetwork(std::istream& in) {
  expect(in, "qnetwork");
  if (integer(in, "version") != kFormatVersion) throw CorruptCheckpoint("unsupported version");
  expect(in, "topology");
  QNetworkParams params;
  try {
    params.topology = topology_from_name(token(in, "topology"));
  } catch (const InvalidConfig& e) {
    throw CorruptCheckpoint(e.what());
  }
  expect(in, "layers");
  const auto count = integer(in, "layer count");
  if (count == 0 || count > 16) throw CorruptCheckpoint("implausible layer count");
  for (long long k = 0; k < count; ++k) {
    const std::string kind = token(in, "layer kind");
    const auto input = static_cast<std::size_t>(integer(in, "input size"));
    const auto output = static_cast<std::size_t>(integer(in, "output size"));
    const std::string option = token(in, "layer option");
    if (input == 0 || output == 0) throw CorruptCheckpoint("zero layer dimension");
    if (kind == "lstm") {
      LstmParams l = LstmParams::zeros(input, output);
      if (option == "current") l.output_peephole = OutputPeephole::CurrentCell;
      else if (option == "previous") l.output_peephole = OutputPeephole::PreviousCell;
      else throw CorruptCheckpoint("unknown peephole source '" + option + "'");
      read_array(in, "w_x", l.w_x);
      read_array(in, "w_h", l.w_h);
      read_array(in, "w_c", l.w_c);
      read_array(in, "b", l.b);
      params.layers.emplace_back(std::move(l));
    } else if (kind == "rnn") {
      RnnParams r = RnnParams::zeros(input, output, activation_from_name(option));
      read_array(in, "w_x", r.w_x);
      read_array(in, "w_h", r.w_h);
      read_array(in, "b", r.b);
      params.layers.emplace_back(std::move(r));
    } else if (kind == "dense") {
      DenseParams d = DenseParams::zeros(input, output, activation_from_name(option));
      read_array(in, "w", d.w);
      read_array(in, "b", d.b);
      params.layers.emplace_back(std::move(d));
    } else {
      throw CorruptCheckpoint("unknown layer kind '" + kind + "'");
    }
  }
  const auto* head = std::get_if<DenseParams>(&params.layers.back());
  if (!head || head->output_size() != kQOutputs) throw CorruptCheckpoint("network must end in a width-4 dense head");
  return params;
}

void save_qnetwork(const std::filesystem::path& path, const QNetworkParams& params) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_qnetwork(out, params);
  if (!out) throw DataError("failed writing " + path.string());
}

QNetworkParams load_qnetwork(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return read_qnetwork(in);
}

}  // namespace spoilage::nnet
