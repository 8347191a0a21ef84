import { DEFAULT_BASE_URL } from "./api.js";
import { renderApp } from "./view.js";
import { Workbench } from "./workbench.js";

function serviceUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("service");
  if (fromQuery !== null && fromQuery !== "") {
    return fromQuery;
  }
  const meta = document.querySelector('meta[name="service-url"]');
  return meta?.getAttribute("content") ?? DEFAULT_BASE_URL;
}

function init(): void {
  const output = document.getElementById("output");
  const form = document.getElementById("workbench-form");
  const s1 = document.getElementById("s1");
  const s2 = document.getElementById("s2");
  if (
    output === null ||
    !(form instanceof HTMLFormElement) ||
    !(s1 instanceof HTMLTextAreaElement) ||
    !(s2 instanceof HTMLTextAreaElement)
  ) {
    throw new Error("workbench markup is missing required elements");
  }

  const bench = new Workbench({
    baseUrl: serviceUrl(),
    onChange: (state) => {
      output.innerHTML = renderApp(state);
    },
  });
  output.innerHTML = renderApp(bench.getState());

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void bench.submit(s1.value, s2.value);
  });
}

init();
