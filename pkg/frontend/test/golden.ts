// Frozen snapshot hashes for the console round-trip and trace-replay tests.
// Regenerate with GOLDEN_UPDATE=1 npm test when the render format changes.

export const GOLDEN = {
  replay: "83b8c34c9ae2ffc300a87e648769f94af5091b1827f2a53c743d8f0612af9a6e",
  console: "7c20e80cdbc875c7939867ea8230af7266a798ecdefdac8f1e452c3f180547d7",
};
