/** View state and the client-side mirror of server-side form validation.
 * Views never mutate the loaded network; all they hold is selection. */

export type ViewName = "overview" | "improve" | "paths" | "whatif";

export interface ViewState {
  active: ViewName;
  networkId: string | null;
  selectedJobId: string | null;
}

export function initialState(): ViewState {
  return { active: "overview", networkId: null, selectedJobId: null };
}

export interface ImproveForm {
  target: string;
  budget: string;
  mode: "change-weight" | "new-connection" | "both";
  opponents: string;
  strategy: "no-increment" | "upper-bound" | "delta" | "delta-ratio";
  strategyParam: string;
  forbidden: string;
  pImp: string;
  degreeFilter: string;
  binarySearch: boolean;
}

export function defaultImproveForm(): ImproveForm {
  return {
    target: "",
    budget: "100",
    mode: "both",
    opponents: "",
    strategy: "no-increment",
    strategyParam: "",
    forbidden: "",
    pImp: "0.01",
    degreeFilter: "",
    binarySearch: true,
  };
}

export function splitRefs(raw: string): string[] {
  return raw
    .split(",")
    .map((s) => s.trim())
    .filter((s) => s.length > 0);
}

/** Mirrors the server's checks so obvious mistakes never leave the form:
 * target present, integer budget >= 1, target not among forbidden nodes,
 * strategy parameters present and sane. Returns field -> message. */
export function validateImproveForm(form: ImproveForm): Record<string, string> {
  const errors: Record<string, string> = {};
  if (!form.target.trim()) errors.target = "target is required";
  const budget = Number(form.budget);
  if (!Number.isInteger(budget) || budget < 1) errors.budget = "budget must be an integer >= 1";
  const forbidden = splitRefs(form.forbidden);
  if (form.target.trim() && forbidden.includes(form.target.trim())) {
    errors.forbidden = "the target cannot be forbidden";
  }
  const opponents = splitRefs(form.opponents);
  if (form.target.trim() && opponents.includes(form.target.trim())) {
    errors.opponents = "the target cannot be its own opponent";
  }
  const pImp = Number(form.pImp);
  if (!(pImp > 0 && pImp <= 1)) errors.pImp = "p_imp must be in (0, 1]";
  if (form.degreeFilter.trim()) {
    const q = Number(form.degreeFilter);
    if (!(q >= 0 && q <= 100)) errors.degreeFilter = "percentile must be in [0, 100]";
  }
  if (form.strategy !== "no-increment") {
    const p = Number(form.strategyParam);
    if (form.strategyParam.trim() === "" && form.strategy !== "delta") {
      errors.strategyParam = "this strategy needs a parameter";
    } else if (form.strategyParam.trim() !== "" && !(p >= 0)) {
      errors.strategyParam = "parameter must be a nonnegative number";
    } else if (form.strategy === "delta-ratio" && !(p > 0)) {
      errors.strategyParam = "delta-ratio needs a ratio > 0";
    }
  }
  return errors;
}

/** Request body for POST /networks/{id}/jobs, mirroring the solver config. */
export function improveRequestBody(form: ImproveForm): Record<string, unknown> {
  const body: Record<string, unknown> = {
    target: form.target.trim(),
    budget: Number(form.budget),
    mode: form.mode,
    use_binary_search: form.binarySearch,
    p_imp: Number(form.pImp),
  };
  const opponents = splitRefs(form.opponents);
  if (opponents.length) {
    body.opponents = opponents;
    body.strategy =
      form.strategy === "no-increment"
        ? "no-increment"
        : `${form.strategy}:${form.strategyParam.trim() || (form.strategy === "delta" ? "0.05" : "")}`;
  }
  const forbidden = splitRefs(form.forbidden);
  if (forbidden.length) body.forbidden = forbidden;
  if (form.degreeFilter.trim()) body.degree_filter_percentile = Number(form.degreeFilter);
  return body;
}
