#include "fjobf/cps.hpp"

namespace fjobf::cps {

const std::string& prelude_text() {
  static const std::string text = R"(type ExCont = Exception => void;
type NmCont = void => void;
type CpsFunc = ExCont => NmCont => void;
CpsFunc loop(void => Boolean cond,
  CpsFunc visitor, CpsFunc exit) {
  return raise -> k -> {
    if (cond()) {
      NmCont => void visitor_raise = visitor(raise);
      NmCont nloop = n -> {
        CpsFunc ploop = loop(cond, visitor, exit);
        NmCont => void ploop_raise = ploop(raise);
        return ploop_raise(k);
      };
      return visitor_raise(nloop);
    } else {
      NmCont => void exit_raise = exit(raise);
      return exit_raise(k);
    }
  };
}
CpsFunc seq(CpsFunc first, CpsFunc second) {
  return raise -> k -> {
    NmCont => void first_raise = first(raise);
    NmCont n_second = n -> {
      NmCont => void second_raise = second(raise);
      return second_raise(k);
    };
    return first_raise(n_second);
  };
}
CpsFunc trycatch(CpsFunc tr, Exception => CpsFunc hdl) {
  return raise -> k -> {
    ExCont ex_hdl = ex -> {
      CpsFunc hdl_ex = hdl(ex);
      NmCont => void hdl_ex_raise = hdl_ex(raise);
      return hdl_ex_raise(k);
    };
    NmCont => void tr_hdl = tr(ex_hdl);
    return tr_hdl(k);
  };
}
CpsFunc ifelse(void => Boolean cond,
  CpsFunc th, CpsFunc el) {
  return raise -> k -> {
    if (cond()) {
      NmCont => void th_raise = th(raise);
      return th_raise(k);
    } else {
      NmCont => void el_raise = el(raise);
      return el_raise(k);
    }
  };
}
void id_raise(Exception e) { return; }
)";
  return text;
}

std::vector<target::TargetMethod> emit_prelude() {
  static const target::TargetProgram parsed = target::parse_target(prelude_text());
  return parsed.functions;
}

}  // namespace fjobf::cps
