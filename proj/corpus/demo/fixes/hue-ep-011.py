import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}

session = requests.Session()


def light_status(light_id):
    url = f'{BASE}/resource/light/{light_id}'
    resp = session.get(url, headers=HEADERS)
    return resp.json()
