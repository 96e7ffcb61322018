// Every user-visible string lives here, keyed by the session language.
// Components never hard-code display text.

export type Language = "en" | "fr";

export const SUPPORTED_LANGUAGES: Language[] = ["en", "fr"];

const en = {
  app_title: "Campus Inventory",
  login_title: "Login",
  login_username: "Username",
  login_password: "Password",
  login_submit: "Submit",
  login_language: "Language",
  login_failed: "Wrong username or password.",
  biometric_prompt: "Please provide your voice sample to finish logging in.",
  biometric_submit: "Verify",
  welcome_title: "Welcome",
  // corrected strings (spelling bugs fixed for good)
  welcome_point_1: "All faculty inventory in one place.",
  welcome_point_2: "Tracking assets becomes much easier.",
  welcome_point_3: "Requests and approvals without paperwork.",
  goodbye: "Bye.",
  menu_asset: "Asset",
  menu_license: "License",
  menu_location: "Location",
  menu_person: "Person",
  menu_administration: "Administration",
  menu_faculty: "Faculty and Department",
  menu_requests: "Requests",
  menu_search: "Search",
  menu_report: "Report",
  menu_logout: "Logout",
  submenu_add_new: "Add new",
  submenu_view: "View",
  submenu_delete: "Delete",
  submenu_borrow: "Borrow",
  submenu_create_group: "Create group",
  submenu_import: "Import from *.csv file/scanner",
  submenu_assign_person: "Assign to person",
  submenu_assign_location: "Assign to location",
  submenu_assign_asset: "Assign to asset",
  submenu_assign_department: "Assign to Department",
  submenu_my_assets: "View asset(s) assigned to me",
  submenu_my_borrowed: "View asset(s) borrowed by me",
  submenu_my_licenses: "View license(s) assigned to me",
  submenu_my_locations: "View location(s) assigned to me",
  submenu_edit_role: "Edit role",
  submenu_assign_role: "Assign role to person(s)",
  submenu_view_roles: "View roles",
  submenu_add_request: "Add new",
  submenu_approve_reject: "Approve/Reject",
  submenu_all_requests: "View list of all requests in the system",
  submenu_basic_search: "Basic search",
  submenu_advanced_search: "Advanced search",
  submenu_create_report: "Create report",
  submenu_audit: "Auditing",
  table_edit: "Edit",
  table_hide: "Hide",
  table_show: "Show",
  table_filter: "Filter",
  table_apply: "Apply",
  table_rows_per_page: "Row/Page",
  table_pages: "Pages:",
  table_sort: "↓",
  table_selection_note:
    "Note: selections do not carry over when you move to another page.",
  form_save: "Save",
  form_cancel: "Cancel",
  form_add_master: "Add Master",
  form_add_child: "Add Child",
  form_create: "Create",
  form_confirm_leave: "Are you Sure? Unsaved changes will be lost.",
  group_needs_master: "Choose a master asset first.",
  group_needs_children: "At least one asset has to be selected",
  import_title: "Import",
  import_columns: "Number of columns",
  import_column_names: "Column names",
  import_location: "Location",
  import_paste: "Paste file content or scan barcodes",
  import_submit: "Import",
  import_select_location: "Select location",
  search_title: "Search",
  search_button: "Search",
  search_empty_query: "Type something to search for.",
  search_no_tables: "Tick at least one table to search in.",
  search_results_for: "Results for",
  search_source: "Source",
  request_new: "New request",
  request_type: "Request type",
  request_period: "Borrow period (days)",
  request_submit: "Submit request",
  report_teaching_lab: "Teaching lab",
  report_research_lab: "Research lab",
  report_offices: "Offices",
  help_title: "Help",
  help_asset: "Add, view, group, import and assign assets from this page.",
  help_license: "Manage software licenses and their seat assignments.",
  help_location: "Manage rooms and storage, and their containment.",
  help_person: "Browse people; accounts are managed by administrators.",
  help_administration: "Edit roles and assign them to people.",
  help_faculty: "Create and view faculties and departments.",
  help_requests: "File requests and approve, reject or complete them.",
  help_search: "Basic search scans everything; advanced picks tables and columns.",
  help_report: "Build location reports or inspect the audit trail.",
  help_login: "Enter your credentials; flagged accounts add a voice check.",
  session_expired: "Your session expired. Please log in again.",
  error_generic: "Something went wrong.",
};

export type StringKey = keyof typeof en;

const fr: Record<StringKey, string> = {
  app_title: "Inventaire du campus",
  login_title: "Connexion",
  login_username: "Nom d'utilisateur",
  login_password: "Mot de passe",
  login_submit: "Envoyer",
  login_language: "Langue",
  login_failed: "Nom d'utilisateur ou mot de passe incorrect.",
  biometric_prompt: "Veuillez fournir votre échantillon vocal pour terminer la connexion.",
  biometric_submit: "Vérifier",
  welcome_title: "Bienvenue",
  welcome_point_1: "Tout l'inventaire des facultés au même endroit.",
  welcome_point_2: "Le suivi des biens devient beaucoup plus simple.",
  welcome_point_3: "Demandes et approbations sans paperasse.",
  goodbye: "Au revoir.",
  menu_asset: "Bien",
  menu_license: "Licence",
  menu_location: "Lieu",
  menu_person: "Personne",
  menu_administration: "Administration",
  menu_faculty: "Faculté et département",
  menu_requests: "Demandes",
  menu_search: "Recherche",
  menu_report: "Rapport",
  menu_logout: "Déconnexion",
  submenu_add_new: "Ajouter",
  submenu_view: "Voir",
  submenu_delete: "Supprimer",
  submenu_borrow: "Emprunter",
  submenu_create_group: "Créer un groupe",
  submenu_import: "Importer depuis un fichier *.csv/scanner",
  submenu_assign_person: "Affecter à une personne",
  submenu_assign_location: "Affecter à un lieu",
  submenu_assign_asset: "Affecter à un bien",
  submenu_assign_department: "Affecter à un département",
  submenu_my_assets: "Biens qui me sont affectés",
  submenu_my_borrowed: "Biens que j'ai empruntés",
  submenu_my_licenses: "Licences qui me sont affectées",
  submenu_my_locations: "Lieux qui me sont affectés",
  submenu_edit_role: "Modifier un rôle",
  submenu_assign_role: "Affecter un rôle",
  submenu_view_roles: "Voir les rôles",
  submenu_add_request: "Ajouter",
  submenu_approve_reject: "Approuver/Rejeter",
  submenu_all_requests: "Voir toutes les demandes du système",
  submenu_basic_search: "Recherche simple",
  submenu_advanced_search: "Recherche avancée",
  submenu_create_report: "Créer un rapport",
  submenu_audit: "Audit",
  table_edit: "Modifier",
  table_hide: "Masquer",
  table_show: "Afficher",
  table_filter: "Filtre",
  table_apply: "Appliquer",
  table_rows_per_page: "Lignes/page",
  table_pages: "Pages :",
  table_sort: "↓",
  table_selection_note:
    "Remarque : la sélection n'est pas conservée en changeant de page.",
  form_save: "Enregistrer",
  form_cancel: "Annuler",
  form_add_master: "Ajouter le maître",
  form_add_child: "Ajouter un enfant",
  form_create: "Créer",
  form_confirm_leave: "Êtes-vous sûr ? Les changements non enregistrés seront perdus.",
  group_needs_master: "Choisissez d'abord un bien maître.",
  group_needs_children: "Au moins un bien doit être sélectionné",
  import_title: "Importer",
  import_columns: "Nombre de colonnes",
  import_column_names: "Noms des colonnes",
  import_location: "Lieu",
  import_paste: "Collez le contenu du fichier ou scannez les codes-barres",
  import_submit: "Importer",
  import_select_location: "Sélectionnez un lieu",
  search_title: "Recherche",
  search_button: "Rechercher",
  search_empty_query: "Saisissez un terme à rechercher.",
  search_no_tables: "Cochez au moins une table où chercher.",
  search_results_for: "Résultats pour",
  search_source: "Source",
  request_new: "Nouvelle demande",
  request_type: "Type de demande",
  request_period: "Durée d'emprunt (jours)",
  request_submit: "Soumettre la demande",
  report_teaching_lab: "Laboratoire d'enseignement",
  report_research_lab: "Laboratoire de recherche",
  report_offices: "Bureaux",
  help_title: "Aide",
  help_asset: "Ajoutez, consultez, groupez, importez et affectez les biens ici.",
  help_license: "Gérez les licences logicielles et leurs sièges.",
  help_location: "Gérez les salles, les entrepôts et leur imbrication.",
  help_person: "Parcourez les personnes ; les comptes relèvent des administrateurs.",
  help_administration: "Modifiez les rôles et affectez-les aux personnes.",
  help_faculty: "Créez et consultez facultés et départements.",
  help_requests: "Déposez des demandes, approuvez, rejetez ou terminez-les.",
  help_search: "La recherche simple balaie tout ; l'avancée choisit tables et colonnes.",
  help_report: "Construisez des rapports ou consultez le journal d'audit.",
  help_login: "Entrez vos identifiants ; certains comptes ajoutent un contrôle vocal.",
  session_expired: "Votre session a expiré. Veuillez vous reconnecter.",
  error_generic: "Une erreur est survenue.",
};

const BUNDLES: Record<Language, Record<StringKey, string>> = { en, fr };

export function t(language: Language, key: StringKey): string {
  return BUNDLES[language][key];
}

export function bundle(language: Language): Record<StringKey, string> {
  return BUNDLES[language];
}
